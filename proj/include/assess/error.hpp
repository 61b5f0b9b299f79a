#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace assess {

enum class ErrorCode {
  DuplicateId,
  UnknownParent,
  CycleDetected,
  UnknownTopic,
  TopicInUse,
  MalformedKey,
  NonPositiveWeight,
  InvalidQuestion,
  ParseError,
  ValidationError,
  MissingProfile,
  ShapeMismatch,
  UnknownQuestion,
  OutOfRange,
  SessionNotFinal,
  EmptyInput,
  InsufficientData,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// One rule violation; `path` locates it in the document ("questions[3].weight")
// or names the offending entity.
struct Violation {
  ErrorCode code;
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<Violation> violations = {})
      : std::runtime_error(message), code_(code), violations_(std::move(violations)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  ErrorCode code_;
  std::vector<Violation> violations_;
};

}  // namespace assess
