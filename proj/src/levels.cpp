#include "assess/levels.hpp"

#include <cmath>
#include <string>

#include "assess/error.hpp"

namespace assess {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownTopic: return "UnknownTopic";
    case ErrorCode::TopicInUse: return "TopicInUse";
    case ErrorCode::MalformedKey: return "MalformedKey";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidQuestion: return "InvalidQuestion";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MissingProfile: return "MissingProfile";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownQuestion: return "UnknownQuestion";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SessionNotFinal: return "SessionNotFinal";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

EducationLevel::EducationLevel(int rank) : rank_(rank) {
  if (rank < min_rank || rank > max_rank) {
    throw Error(ErrorCode::OutOfRange,
                "education level " + std::to_string(rank) + " outside 1..5");
  }
}

KnowledgeLevel infer_level(double percent) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw Error(ErrorCode::OutOfRange, "percent " + std::to_string(percent) + " outside [0,100]");
  }
  if (percent < 50.0) return KnowledgeLevel::low;
  if (percent <= 75.0) return KnowledgeLevel::good;
  return KnowledgeLevel::high;
}

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::medium: return "medium";
    case Difficulty::difficult: return "difficult";
  }
  return "?";
}

std::string_view to_string(KnowledgeLevel k) {
  switch (k) {
    case KnowledgeLevel::low: return "low";
    case KnowledgeLevel::good: return "good";
    case KnowledgeLevel::high: return "high";
  }
  return "?";
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::below: return "below";
    case Relation::at_most: return "at_most";
    case Relation::match: return "match";
    case Relation::at_least: return "at_least";
    case Relation::above: return "above";
  }
  return "?";
}

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  if (s == "easy") return Difficulty::easy;
  if (s == "medium") return Difficulty::medium;
  if (s == "difficult") return Difficulty::difficult;
  return std::nullopt;
}

std::optional<KnowledgeLevel> parse_knowledge(std::string_view s) {
  if (s == "low") return KnowledgeLevel::low;
  if (s == "good") return KnowledgeLevel::good;
  if (s == "high") return KnowledgeLevel::high;
  return std::nullopt;
}

std::optional<Relation> parse_relation(std::string_view s) {
  if (s == "below") return Relation::below;
  if (s == "at_most") return Relation::at_most;
  if (s == "match") return Relation::match;
  if (s == "at_least") return Relation::at_least;
  if (s == "above") return Relation::above;
  return std::nullopt;
}

}  // namespace assess
