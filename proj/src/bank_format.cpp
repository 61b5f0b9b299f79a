#include "assess/bank_format.hpp"

#include "json_reader.hpp"

namespace assess {

using detail::Reader;

namespace {

Json options_to_json(const std::vector<Option>& opts) {
  Json arr = Json::array();
  for (const auto& o : opts) arr.push_back(Json{{"id", o.id}, {"text", o.text}});
  return arr;
}

std::vector<Option> options_from(const Reader& r) {
  std::vector<Option> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto item = r.at(i);
    out.push_back({item.field("id").str(), item.field("text").str()});
  }
  return out;
}

Json string_map(const std::map<std::string, std::string>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, std::string> string_map_from(const Reader& r) {
  r.expect_object();
  std::map<std::string, std::string> out;
  for (const auto& [k, _] : r.json().items()) out[k] = r.field(k).str();
  return out;
}

Json region_to_json(const Region& region) {
  if (const auto* rect = std::get_if<Rect>(&region)) {
    return Json{{"shape", "rect"}, {"x", rect->x}, {"y", rect->y}, {"width", rect->width}, {"height", rect->height}};
  }
  Json pts = Json::array();
  for (const auto& p : std::get<Polygon>(region).points) pts.push_back(Json::array({p.x, p.y}));
  return Json{{"shape", "polygon"}, {"points", pts}};
}

Region region_from(const Reader& r) {
  const auto shape = r.field("shape").str();
  if (shape == "rect") {
    return Rect{r.field("x").number(), r.field("y").number(), r.field("width").number(),
                r.field("height").number()};
  }
  if (shape == "polygon") {
    Polygon poly;
    auto pts = r.field("points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto p = pts.at(i);
      if (p.size() != 2) p.fail("expected [x, y]");
      poly.points.push_back({p.at(0).number(), p.at(1).number()});
    }
    return poly;
  }
  r.field("shape").fail("unknown region shape '" + shape + "'");
}

// Body and key for each type. Likert has no key.
std::pair<Json, std::optional<Json>> content_to_json(const QuestionContent& content) {
  return std::visit(
      [](const auto& c) -> std::pair<Json, std::optional<Json>> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MultipleChoice>) {
          return {Json{{"options", options_to_json(c.options)}}, Json(c.key)};
        } else if constexpr (std::is_same_v<T, MultipleResponse>) {
          return {Json{{"options", options_to_json(c.options)}}, Json(c.key)};
        } else if constexpr (std::is_same_v<T, TrueFalse>) {
          return {Json::object(), Json(c.key)};
        } else if constexpr (std::is_same_v<T, FillBlanks>) {
          Json key = Json::object();
          for (const auto& [id, accepted] : c.key) key[id] = accepted;
          return {Json{{"text", c.text}, {"blanks", c.blanks}}, key};
        } else if constexpr (std::is_same_v<T, Matching>) {
          return {Json{{"left", options_to_json(c.left)}, {"right", options_to_json(c.right)}}, string_map(c.key)};
        } else if constexpr (std::is_same_v<T, Sequence>) {
          return {Json{{"items", options_to_json(c.items)}}, Json(c.key)};
        } else if constexpr (std::is_same_v<T, Hotspot>) {
          return {Json{{"image", c.image}, {"width", c.width}, {"height", c.height}}, region_to_json(c.key)};
        } else if constexpr (std::is_same_v<T, DragDrop>) {
          return {Json{{"items", options_to_json(c.items)}, {"zones", options_to_json(c.zones)}}, string_map(c.key)};
        } else if constexpr (std::is_same_v<T, SelectLists>) {
          Json lists = Json::array();
          for (const auto& l : c.lists) {
            lists.push_back(Json{{"id", l.id}, {"prompt", l.prompt}, {"options", options_to_json(l.options)}});
          }
          return {Json{{"lists", lists}}, string_map(c.key)};
        } else {
          Json body{{"points", c.points}};
          if (!c.labels.empty()) body["labels"] = c.labels;
          return {body, std::nullopt};
        }
      },
      content);
}

QuestionContent content_from(QuestionType type, const Reader& body, const Reader& q) {
  switch (type) {
    case QuestionType::multiple_choice:
      return MultipleChoice{options_from(body.field("options")), q.field("key").str()};
    case QuestionType::multiple_response:
      return MultipleResponse{options_from(body.field("options")), q.field("key").strings()};
    case QuestionType::true_false:
      body.expect_object();
      return TrueFalse{q.field("key").boolean()};
    case QuestionType::fill_blanks: {
      FillBlanks fb{body.field("text").str(), body.field("blanks").strings(), {}};
      auto key = q.field("key");
      key.expect_object();
      for (const auto& [id, _] : key.json().items()) fb.key[id] = key.field(id).strings();
      return fb;
    }
    case QuestionType::matching:
      return Matching{options_from(body.field("left")), options_from(body.field("right")),
                      string_map_from(q.field("key"))};
    case QuestionType::sequence:
      return Sequence{options_from(body.field("items")), q.field("key").strings()};
    case QuestionType::hotspot:
      return Hotspot{body.field("image").str(), body.field("width").number(), body.field("height").number(),
                     region_from(q.field("key"))};
    case QuestionType::drag_drop:
      return DragDrop{options_from(body.field("items")), options_from(body.field("zones")),
                      string_map_from(q.field("key"))};
    case QuestionType::select_lists: {
      SelectLists sl;
      auto lists = body.field("lists");
      for (std::size_t i = 0; i < lists.size(); ++i) {
        auto l = lists.at(i);
        sl.lists.push_back({l.field("id").str(), l.field("prompt").str(), options_from(l.field("options"))});
      }
      sl.key = string_map_from(q.field("key"));
      return sl;
    }
    case QuestionType::likert: {
      Likert lk;
      lk.points = static_cast<int>(body.field("points").integer());
      if (body.has("labels")) lk.labels = body.field("labels").strings();
      return lk;
    }
  }
  body.fail("unsupported type");
}

// Parses one question; rule violations that cannot be represented in the
// typed model (likert key, education rank) are returned alongside it.
std::pair<Question, std::vector<Violation>> parse_question(const Reader& r) {
  std::vector<Violation> extra;
  Question q;
  q.id = r.field("id").str();

  auto type_field = r.field("type");
  const auto type = parse_question_type(type_field.str());
  if (!type) type_field.fail("unknown question type '" + type_field.str() + "'");

  auto stem = r.field("stem");
  q.stem.text = stem.field("text").str();
  if (stem.has("media")) q.stem.media = stem.field("media").str();

  if (*type == QuestionType::likert) {
    if (r.has("key")) extra.push_back({ErrorCode::MalformedKey, "key", "likert questions carry no key"});
    q.content = content_from(*type, r.field("body"), r);
  } else {
    if (!r.has("key")) {
      throw Error(ErrorCode::ValidationError, r.path() + ": missing answer key",
                  {{ErrorCode::MalformedKey, r.path() + ".key", "missing answer key"}});
    }
    q.content = content_from(*type, r.field("body"), r);
  }

  auto diff_field = r.field("difficulty");
  const auto diff = parse_difficulty(diff_field.str());
  if (!diff) diff_field.fail("unknown difficulty '" + diff_field.str() + "'");
  q.difficulty = *diff;

  const auto rank = r.field("education_level").integer();
  if (rank < EducationLevel::min_rank || rank > EducationLevel::max_rank) {
    extra.push_back({ErrorCode::OutOfRange, "education_level", "education level must be 1..5"});
  } else {
    q.education_level = EducationLevel(static_cast<int>(rank));
  }

  q.weight = r.has("weight") ? r.field("weight").number() : 1.0;
  q.topics = r.field("topics").strings();
  if (r.has("explanations")) q.explanations = string_map_from(r.field("explanations"));
  return {std::move(q), std::move(extra)};
}

}  // namespace

Json question_to_json(const Question& q, KeyVisibility visibility) {
  Json j;
  j["id"] = q.id;
  j["type"] = to_string(q.type());
  Json stem{{"text", q.stem.text}};
  if (q.stem.media) stem["media"] = *q.stem.media;
  j["stem"] = stem;
  auto [body, key] = content_to_json(q.content);
  j["body"] = std::move(body);
  if (key && visibility == KeyVisibility::with_key) j["key"] = std::move(*key);
  j["difficulty"] = to_string(q.difficulty);
  j["education_level"] = q.education_level.rank();
  j["weight"] = q.weight;
  j["topics"] = q.topics;
  if (!q.explanations.empty() && visibility == KeyVisibility::with_key) j["explanations"] = string_map(q.explanations);
  return j;
}

Question question_from_json(const Json& j, const QuestionBank& bank) {
  auto [q, extra] = parse_question(Reader(j, "question"));
  if (!extra.empty()) {
    throw Error(extra.front().code, "question '" + q.id + "': " + extra.front().message, extra);
  }
  // Runs the bank's checks without mutating it.
  QuestionBank scratch = bank;
  if (scratch.find(q.id)) scratch.remove_question(q.id);
  scratch.add_question(q);
  return q;
}

Json topic_to_json(const TopicNode& node) {
  Json j{{"id", node.id}, {"name", node.name}};
  if (node.parent) j["parent"] = *node.parent;
  return j;
}

TopicNode topic_from_json(const Json& j, const std::string& path) {
  Reader r(j, path);
  TopicNode node{r.field("id").str(), r.field("name").str(), std::nullopt};
  if (r.has("parent")) node.parent = r.field("parent").str();
  return node;
}

Json bank_to_json(const QuestionBank& bank) {
  Json topics = Json::array();
  for (const auto& n : bank.topics().nodes()) topics.push_back(topic_to_json(n));
  Json questions = Json::array();
  for (const auto& q : bank.questions()) questions.push_back(question_to_json(q));
  return Json{{"format_version", bank_format_version}, {"topics", topics}, {"questions", questions}};
}

QuestionBank bank_from_json(const Json& j) {
  Reader root(j, "");
  auto version = root.field("format_version");
  if (version.integer() != bank_format_version) {
    version.fail("unsupported format_version " + version.json().dump());
  }

  auto topics_r = root.field("topics");
  std::vector<TopicNode> nodes;
  for (std::size_t i = 0; i < topics_r.size(); ++i) {
    nodes.push_back(topic_from_json(topics_r.at(i).json(), topics_r.at(i).path()));
  }

  std::vector<Violation> violations;
  TopicHierarchy hierarchy;
  try {
    hierarchy = TopicHierarchy::from_nodes(nodes);
  } catch (const Error& e) {
    violations = e.violations();
    // Keep validating questions against whatever ids were declared.
    for (const auto& n : nodes) {
      if (!hierarchy.contains(n.id)) hierarchy.add(TopicNode{n.id, n.name, std::nullopt});
    }
  }

  auto questions_r = root.field("questions");
  std::vector<Question> questions;
  std::vector<std::size_t> origin;  // document index of each parsed question
  for (std::size_t i = 0; i < questions_r.size(); ++i) {
    auto qr = questions_r.at(i);
    try {
      auto [q, extra] = parse_question(qr);
      for (auto& v : extra) {
        v.path = qr.path() + "." + v.path;
        violations.push_back(std::move(v));
      }
      questions.push_back(std::move(q));
      origin.push_back(i);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ValidationError) throw;
      violations.insert(violations.end(), e.violations().begin(), e.violations().end());
    }
  }

  try {
    auto bank = QuestionBank::from_parts(std::move(hierarchy), std::move(questions));
    if (violations.empty()) {
      // from_parts succeeded on the real hierarchy.
      return bank;
    }
  } catch (const Error& e) {
    for (auto v : e.violations()) {
      // Map "questions[k]" back to the document index.
      if (v.path.starts_with("questions[")) {
        const auto close = v.path.find(']');
        const auto k = std::stoul(v.path.substr(10, close - 10));
        v.path = "questions[" + std::to_string(origin.at(k)) + "]" + v.path.substr(close + 1);
      }
      violations.push_back(std::move(v));
    }
  }
  throw Error(ErrorCode::ValidationError,
              "bank has " + std::to_string(violations.size()) + " violation(s)", std::move(violations));
}

std::string export_bank(const QuestionBank& bank) { return bank_to_json(bank).dump(2) + "\n"; }

QuestionBank import_bank(std::string_view document) {
  Json j;
  try {
    j = Json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what(), {{ErrorCode::ParseError, "document", e.what()}});
  }
  return bank_from_json(j);
}

}  // namespace assess
