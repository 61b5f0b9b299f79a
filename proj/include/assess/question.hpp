#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "assess/error.hpp"
#include "assess/levels.hpp"

namespace assess {

// Order matches the alternatives of QuestionContent.
enum class QuestionType {
  multiple_choice,
  multiple_response,
  true_false,
  fill_blanks,
  matching,
  sequence,
  hotspot,
  drag_drop,
  select_lists,
  likert,
};

inline constexpr std::size_t question_type_count = 10;

std::string_view to_string(QuestionType type);
std::optional<QuestionType> parse_question_type(std::string_view s);

struct Option {
  std::string id;
  std::string text;
  bool operator==(const Option&) const = default;
};

struct MultipleChoice {
  std::vector<Option> options;
  std::string key;
  bool operator==(const MultipleChoice&) const = default;
};

struct MultipleResponse {
  std::vector<Option> options;
  std::vector<std::string> key;
  bool operator==(const MultipleResponse&) const = default;
};

struct TrueFalse {
  bool key = true;
  bool operator==(const TrueFalse&) const = default;
};

// `text` marks blanks inline; `blanks` lists their ids in reading order.
struct FillBlanks {
  std::string text;
  std::vector<std::string> blanks;
  std::map<std::string, std::vector<std::string>> key;  // blank id -> acceptable answers
  bool operator==(const FillBlanks&) const = default;
};

struct Matching {
  std::vector<Option> left;
  std::vector<Option> right;
  std::map<std::string, std::string> key;  // left id -> right id
  bool operator==(const Matching&) const = default;
};

struct Sequence {
  std::vector<Option> items;       // presentation order
  std::vector<std::string> key;    // correct order of item ids
  bool operator==(const Sequence&) const = default;
};

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

struct Rect {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;
  bool operator==(const Rect&) const = default;
};

struct Polygon {
  std::vector<Point> points;
  bool operator==(const Polygon&) const = default;
};

using Region = std::variant<Rect, Polygon>;

/// Boundary-inclusive point-in-region test.
bool contains(const Region& region, Point p);

struct Hotspot {
  std::string image;  // opaque URI
  double width = 0;
  double height = 0;
  Region key;
  bool operator==(const Hotspot&) const = default;
};

struct DragDrop {
  std::vector<Option> items;
  std::vector<Option> zones;
  std::map<std::string, std::string> key;  // item id -> zone id
  bool operator==(const DragDrop&) const = default;
};

struct SelectList {
  std::string id;
  std::string prompt;
  std::vector<Option> options;
  bool operator==(const SelectList&) const = default;
};

struct SelectLists {
  std::vector<SelectList> lists;
  std::map<std::string, std::string> key;  // list id -> option id
  bool operator==(const SelectLists&) const = default;
};

// Unkeyed opinion scale.
struct Likert {
  int points = 5;
  std::vector<std::string> labels;  // empty or one per point
  bool operator==(const Likert&) const = default;
};

using QuestionContent = std::variant<MultipleChoice, MultipleResponse, TrueFalse, FillBlanks,
                                     Matching, Sequence, Hotspot, DragDrop, SelectLists, Likert>;

struct Stem {
  std::string text;
  std::optional<std::string> media;  // opaque URI, never dereferenced
  bool operator==(const Stem&) const = default;
};

struct Question {
  std::string id;
  Stem stem;
  QuestionContent content;
  Difficulty difficulty = Difficulty::medium;
  EducationLevel education_level{1};
  double weight = 1.0;
  std::vector<std::string> topics;
  std::map<std::string, std::string> explanations;  // part id -> text

  QuestionType type() const noexcept { return static_cast<QuestionType>(content.index()); }
  bool keyed() const noexcept { return type() != QuestionType::likert; }

  bool operator==(const Question&) const = default;
};

/// Self-contained shape checks: ids, body structure, key well-formedness,
/// weight and topic-list sanity. Topic resolution is the bank's job.
/// Violation paths are relative to the question ("key", "weight", ...).
std::vector<Violation> validate_question(const Question& q);

/// Ids an explanation may be attached to (options, pairs, blanks, lists...).
/// "question" is always accepted for a general note.
std::vector<std::string> part_ids(const Question& q);

}  // namespace assess
