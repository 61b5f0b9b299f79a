#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace assess {

enum class Difficulty { easy = 1, medium = 2, difficult = 3 };

enum class KnowledgeLevel { low = 1, good = 2, high = 3 };

/// Comparison applied to any of the ordinal scales: <, <=, ==, >=, >.
enum class Relation { below, at_most, match, at_least, above };

/// Education tier, ranked 1 (lowest) to 5.
class EducationLevel {
 public:
  static constexpr int min_rank = 1;
  static constexpr int max_rank = 5;

  // Throws Error(OutOfRange) outside 1..5.
  explicit EducationLevel(int rank);

  constexpr int rank() const noexcept { return rank_; }
  auto operator<=>(const EducationLevel&) const = default;

 private:
  int rank_;
};

/// Deployment-specific display labels for the five education ranks.
struct EducationScale {
  std::array<std::string, 5> labels{"Primary", "Lower secondary", "Upper secondary",
                                    "Undergraduate", "Postgraduate"};

  const std::string& label(EducationLevel level) const { return labels[level.rank() - 1]; }
};

constexpr Difficulty to_difficulty(KnowledgeLevel level) noexcept {
  return static_cast<Difficulty>(static_cast<int>(level));
}

constexpr KnowledgeLevel to_knowledge(Difficulty difficulty) noexcept {
  return static_cast<KnowledgeLevel>(static_cast<int>(difficulty));
}

constexpr bool satisfies(Relation relation, int value, int pivot) noexcept {
  switch (relation) {
    case Relation::below: return value < pivot;
    case Relation::at_most: return value <= pivot;
    case Relation::match: return value == pivot;
    case Relation::at_least: return value >= pivot;
    case Relation::above: return value > pivot;
  }
  return false;
}

constexpr bool satisfies(Relation relation, Difficulty value, Difficulty pivot) noexcept {
  return satisfies(relation, static_cast<int>(value), static_cast<int>(pivot));
}

inline bool satisfies(Relation relation, EducationLevel value, EducationLevel pivot) noexcept {
  return satisfies(relation, value.rank(), pivot.rank());
}

/// Knowledge band for a topic percent: [0,50) low, [50,75] good, (75,100] high.
/// Throws Error(OutOfRange) for percents outside [0,100] or NaN.
KnowledgeLevel infer_level(double percent);

std::string_view to_string(Difficulty d);
std::string_view to_string(KnowledgeLevel k);
std::string_view to_string(Relation r);

std::optional<Difficulty> parse_difficulty(std::string_view s);
std::optional<KnowledgeLevel> parse_knowledge(std::string_view s);
std::optional<Relation> parse_relation(std::string_view s);

}  // namespace assess
