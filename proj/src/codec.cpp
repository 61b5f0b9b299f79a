#include "assess/codec.hpp"

#include "json_reader.hpp"

namespace assess {

using detail::Reader;

namespace {

constexpr int profile_format_version = 1;

std::string_view rule_kind(const SelectionRule& rule) {
  switch (rule.index()) {
    case 0: return "by_difficulty";
    case 1: return "by_knowledge";
    case 2: return "by_education";
    default: return "auto";
  }
}

Relation relation_from(const Reader& r) {
  const auto rel = parse_relation(r.str());
  if (!rel) r.fail("unknown relation '" + r.str() + "'");
  return *rel;
}

KnowledgeLevel knowledge_from(const Reader& r) {
  const auto k = parse_knowledge(r.str());
  if (!k) r.fail("unknown knowledge level '" + r.str() + "'");
  return *k;
}

EducationLevel education_from(const Reader& r) {
  const auto rank = r.integer();
  if (rank < EducationLevel::min_rank || rank > EducationLevel::max_rank) r.fail("education level must be 1..5");
  return EducationLevel(static_cast<int>(rank));
}

Json levels_to_json(const std::map<std::string, KnowledgeLevel>& levels) {
  Json j = Json::object();
  for (const auto& [t, l] : levels) j[t] = to_string(l);
  return j;
}

std::map<std::string, KnowledgeLevel> levels_from(const Reader& r) {
  r.expect_object();
  std::map<std::string, KnowledgeLevel> out;
  for (const auto& [k, _] : r.json().items()) out[k] = knowledge_from(r.field(k));
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

[[noreturn]] void shape_error(const Question& q, const std::string& what) {
  throw Error(ErrorCode::ShapeMismatch, "answer to '" + q.id + "': " + what,
              {{ErrorCode::ShapeMismatch, q.id, what}});
}

std::map<std::string, std::string> string_map(const Question& q, const Json& j) {
  if (!j.is_object()) shape_error(q, "expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) shape_error(q, "expected string values");
    out[k] = v.get<std::string>();
  }
  return out;
}

std::vector<std::string> string_list(const Question& q, const Json& j) {
  if (!j.is_array()) shape_error(q, "expected an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) shape_error(q, "expected string ids");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Json to_json(const SelectionCriteria& c) {
  Json rule{{"kind", rule_kind(c.rule)}};
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ByDifficulty>) {
          rule["relation"] = to_string(r.relation);
          rule["pivot"] = to_string(r.pivot);
        } else if constexpr (std::is_same_v<T, ByKnowledge>) {
          rule["relation"] = to_string(r.relation);
          if (r.pivot) rule["pivot"] = to_string(*r.pivot);
        } else if constexpr (std::is_same_v<T, ByEducation>) {
          rule["relation"] = to_string(r.relation);
          if (r.pivot) rule["pivot"] = r.pivot->rank();
        }
      },
      c.rule);
  return Json{{"topics", c.topics}, {"rule", rule}, {"count", c.count}, {"seed", c.seed},
              {"include_likert", c.include_likert}};
}

SelectionCriteria criteria_from_json(const Json& j) {
  Reader r(j, "criteria");
  SelectionCriteria c;
  c.topics = r.field("topics").strings();
  auto rule = r.field("rule");
  const auto kind = rule.field("kind").str();
  if (kind == "by_difficulty") {
    auto pivot = rule.field("pivot");
    const auto d = parse_difficulty(pivot.str());
    if (!d) pivot.fail("unknown difficulty '" + pivot.str() + "'");
    c.rule = ByDifficulty{relation_from(rule.field("relation")), *d};
  } else if (kind == "by_knowledge") {
    ByKnowledge k{relation_from(rule.field("relation")), std::nullopt};
    if (rule.has("pivot")) k.pivot = knowledge_from(rule.field("pivot"));
    c.rule = k;
  } else if (kind == "by_education") {
    ByEducation e{relation_from(rule.field("relation")), std::nullopt};
    if (rule.has("pivot")) e.pivot = education_from(rule.field("pivot"));
    c.rule = e;
  } else if (kind == "auto") {
    c.rule = AutoMode{};
  } else {
    rule.field("kind").fail("unknown rule kind '" + kind + "'");
  }
  const auto count = r.field("count").integer();
  if (count < 1 || count > 100000) r.field("count").fail("count must be between 1 and 100000");
  c.count = static_cast<int>(count);
  if (r.has("seed")) {
    auto seed = r.field("seed");
    if (!seed.json().is_number_unsigned() && !(seed.json().is_number_integer() && seed.json().get<long long>() >= 0)) {
      seed.fail("seed must be a non-negative integer");
    }
    c.seed = seed.json().get<std::uint64_t>();
  }
  if (r.has("include_likert")) c.include_likert = r.field("include_likert").boolean();
  return c;
}

Json to_json(const std::optional<Response>& response) {
  if (!response) return nullptr;
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ChosenOption>) return r.option;
        else if constexpr (std::is_same_v<T, ChosenOptions>) return r.options;
        else if constexpr (std::is_same_v<T, TruthValue>) return r.value;
        else if constexpr (std::is_same_v<T, BlankFills>) {
          Json j = Json::object();
          for (const auto& [k, v] : r.fills) j[k] = v;
          return j;
        } else if constexpr (std::is_same_v<T, Assignment>) {
          Json j = Json::object();
          for (const auto& [k, v] : r.pairs) j[k] = v;
          return j;
        } else if constexpr (std::is_same_v<T, Ordering>) return r.order;
        else if constexpr (std::is_same_v<T, Click>) return Json{{"x", r.at.x}, {"y", r.at.y}};
        else return r.point;
      },
      *response);
}

std::optional<Response> response_from_json(const Question& q, const Json& j) {
  if (j.is_null()) return std::nullopt;
  switch (q.type()) {
    case QuestionType::multiple_choice:
      if (!j.is_string()) shape_error(q, "expected an option id");
      return ChosenOption{j.get<std::string>()};
    case QuestionType::multiple_response:
      return ChosenOptions{string_list(q, j)};
    case QuestionType::true_false:
      if (!j.is_boolean()) shape_error(q, "expected true or false");
      return TruthValue{j.get<bool>()};
    case QuestionType::fill_blanks:
      return BlankFills{string_map(q, j)};
    case QuestionType::matching:
    case QuestionType::drag_drop:
    case QuestionType::select_lists:
      return Assignment{string_map(q, j)};
    case QuestionType::sequence:
      return Ordering{string_list(q, j)};
    case QuestionType::hotspot:
      if (!j.is_object() || !j.contains("x") || !j.contains("y") || !j["x"].is_number() || !j["y"].is_number()) {
        shape_error(q, "expected {x, y}");
      }
      return Click{{j["x"].get<double>(), j["y"].get<double>()}};
    case QuestionType::likert:
      if (!j.is_number_integer()) shape_error(q, "expected a scale point");
      return ScalePoint{j.get<int>()};
  }
  shape_error(q, "unsupported type");
}

Json to_json(const TopicResult& r) {
  return Json{{"topic_id", r.topic_id}, {"percent", r.percent}, {"item_count", r.item_count},
              {"level", to_string(r.inferred_level)}};
}

TopicResult topic_result_from_json(const Json& j) {
  Reader r(j, "result");
  return TopicResult{r.field("topic_id").str(), r.field("percent").number(),
                     static_cast<int>(r.field("item_count").integer()), knowledge_from(r.field("level"))};
}

Json to_json(const std::vector<TopicResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  return arr;
}

Json to_json(const WeaknessReport& report) {
  Json entries = Json::array();
  Json weak = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back(Json{{"topic_id", e.topic_id}, {"percent", e.percent}, {"level", to_string(e.level)}, {"weak", e.weak}});
    if (e.weak) weak.push_back(e.topic_id);
  }
  Json erroneous = Json::array();
  for (const auto& e : report.erroneous) {
    erroneous.push_back(Json{{"question_id", e.question_id}, {"score", e.score}, {"concepts", e.concepts}});
  }
  return Json{{"entries", entries}, {"weaknesses", weak}, {"erroneous", erroneous}};
}

Json to_json(const SessionReport& report) {
  Json items = Json::array();
  for (const auto& it : report.items) {
    Json j{{"question_id", it.question_id}, {"graded", it.graded}, {"score", optional_number(it.score)},
           {"correct", it.correct}, {"topics", it.topics}};
    if (!it.explanations.empty()) {
      Json ex = Json::object();
      for (const auto& [k, v] : it.explanations) ex[k] = v;
      j["explanations"] = ex;
    }
    items.push_back(std::move(j));
  }
  return Json{{"session_id", report.session_id},
              {"overall_percent", optional_number(report.overall_percent)},
              {"items", items},
              {"topics", to_json(report.topics)},
              {"weakness", to_json(report.weakness)}};
}

Json to_json(const SessionRecord& record) {
  return Json{{"session_id", record.session_id}, {"completed_at", record.completed_at},
              {"criteria", to_json(record.criteria)}, {"results", to_json(record.results)},
              {"levels", levels_to_json(record.levels)}};
}

SessionRecord session_record_from_json(const Json& j) {
  Reader r(j, "record");
  SessionRecord rec;
  rec.session_id = r.field("session_id").str();
  rec.completed_at = r.field("completed_at").integer();
  rec.criteria = criteria_from_json(r.field("criteria").json());
  auto results = r.field("results");
  for (std::size_t i = 0; i < results.size(); ++i) rec.results.push_back(topic_result_from_json(results.at(i).json()));
  rec.levels = levels_from(r.field("levels"));
  return rec;
}

Json to_json(const LearnerProfile& p) {
  Json history = Json::array();
  for (const auto& h : p.history) history.push_back(to_json(h));
  return Json{{"format_version", profile_format_version},
              {"learner_id", p.learner_id},
              {"education_level", p.education_level.rank()},
              {"knowledge", levels_to_json(p.knowledge)},
              {"history", history}};
}

LearnerProfile profile_from_json(const Json& j) {
  Reader r(j, "profile");
  if (r.field("format_version").integer() != profile_format_version) r.field("format_version").fail("unsupported version");
  LearnerProfile p;
  p.learner_id = r.field("learner_id").str();
  p.education_level = education_from(r.field("education_level"));
  p.knowledge = levels_from(r.field("knowledge"));
  auto history = r.field("history");
  for (std::size_t i = 0; i < history.size(); ++i) p.history.push_back(session_record_from_json(history.at(i).json()));
  return p;
}

Json to_json(const analytics::TTestResult& r) {
  return Json{{"variant", r.variant == analytics::TTestVariant::pooled ? "pooled" : "welch"},
              {"t_statistic", r.t_statistic},
              {"degrees_of_freedom", r.degrees_of_freedom},
              {"p_value", r.p_value},
              {"significant_at_0_05", r.p_value < 0.05}};
}

Json to_json(const analytics::EngagementCounters& c) {
  return Json{{"unique_takers", c.unique_takers}, {"total_runs", c.total_runs}, {"reruns", c.reruns}};
}

Json to_json(const analytics::RunEvent& e) { return Json{{"taker", e.taker}, {"timestamp", e.timestamp}}; }

analytics::RunEvent run_event_from_json(const Json& j) {
  Reader r(j, "event");
  return {r.field("taker").str(), r.field("timestamp").integer()};
}

}  // namespace assess
