#include "assess/simulate.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "assess/assessment.hpp"
#include "json_reader.hpp"

namespace assess {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::map<std::string, std::string> shifted(const std::map<std::string, std::string>& key) {
  // Assigns each entry another entry's target; distinct for a bijective key.
  std::vector<std::string> targets;
  for (const auto& [_, v] : key) targets.push_back(v);
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  for (const auto& [k, _] : key) out[k] = targets[(++i) % targets.size()];
  return out;
}

std::string other_than(const std::vector<Option>& options, const std::string& id) {
  for (const auto& o : options) {
    if (o.id != id) return o.id;
  }
  return id;
}

}  // namespace

Response correct_response(const Question& q) {
  return std::visit(
      [](const auto& c) -> Response {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MultipleChoice>) return ChosenOption{c.key};
        else if constexpr (std::is_same_v<T, MultipleResponse>) return ChosenOptions{c.key};
        else if constexpr (std::is_same_v<T, TrueFalse>) return TruthValue{c.key};
        else if constexpr (std::is_same_v<T, FillBlanks>) {
          BlankFills f;
          for (const auto& [id, accepted] : c.key) f.fills[id] = accepted.front();
          return f;
        } else if constexpr (std::is_same_v<T, Matching> || std::is_same_v<T, DragDrop> ||
                             std::is_same_v<T, SelectLists>) {
          return Assignment{c.key};
        } else if constexpr (std::is_same_v<T, Sequence>) return Ordering{c.key};
        else if constexpr (std::is_same_v<T, Hotspot>) {
          if (const auto* r = std::get_if<Rect>(&c.key)) return Click{{r->x + r->width / 2, r->y + r->height / 2}};
          return Click{std::get<Polygon>(c.key).points.front()};  // boundary counts as inside
        } else {
          return ScalePoint{(c.points + 1) / 2};
        }
      },
      q.content);
}

Response wrong_response(const Question& q) {
  return std::visit(
      [](const auto& c) -> Response {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MultipleChoice>) return ChosenOption{other_than(c.options, c.key)};
        else if constexpr (std::is_same_v<T, MultipleResponse>) {
          ChosenOptions r;
          for (const auto& o : c.options) {
            if (std::find(c.key.begin(), c.key.end(), o.id) == c.key.end()) r.options.push_back(o.id);
          }
          return r;
        } else if constexpr (std::is_same_v<T, TrueFalse>) return TruthValue{!c.key};
        else if constexpr (std::is_same_v<T, FillBlanks>) {
          BlankFills f;
          for (const auto& id : c.blanks) f.fills[id] = "";
          return f;
        } else if constexpr (std::is_same_v<T, Matching>) return Assignment{shifted(c.key)};
        else if constexpr (std::is_same_v<T, DragDrop>) {
          Assignment a;
          for (const auto& [item, zone] : c.key) a.pairs[item] = other_than(c.zones, zone);
          return a;
        } else if constexpr (std::is_same_v<T, SelectLists>) {
          Assignment a;
          for (const auto& l : c.lists) a.pairs[l.id] = other_than(l.options, c.key.at(l.id));
          return a;
        } else if constexpr (std::is_same_v<T, Sequence>) {
          Ordering o{c.key};
          std::rotate(o.order.begin(), o.order.begin() + 1, o.order.end());
          return o;
        } else if constexpr (std::is_same_v<T, Hotspot>) {
          double min_x = std::numeric_limits<double>::infinity();
          double min_y = min_x;
          if (const auto* r = std::get_if<Rect>(&c.key)) {
            min_x = r->x;
            min_y = r->y;
          } else {
            for (const auto& p : std::get<Polygon>(c.key).points) {
              min_x = std::min(min_x, p.x);
              min_y = std::min(min_y, p.y);
            }
          }
          return Click{{min_x - 1.0, min_y - 1.0}};
        } else {
          return ScalePoint{(c.points + 1) / 2};
        }
      },
      q.content);
}

SimulationPolicy policy_from_json(const Json& j) {
  detail::Reader r(j, "policy");
  SimulationPolicy p;
  auto prob = r.field("correct_probability");
  if (prob.json().is_number()) {
    p.correct_probability.fill(prob.number());
  } else {
    p.correct_probability = {prob.field("easy").number(), prob.field("medium").number(),
                             prob.field("difficult").number()};
  }
  for (double v : p.correct_probability) {
    if (!(v >= 0.0 && v <= 1.0)) prob.fail("probabilities must lie in [0,1]");
  }
  if (r.has("runs_per_student")) {
    const auto runs = r.field("runs_per_student").integer();
    if (runs < 1) r.field("runs_per_student").fail("must be at least 1");
    p.runs_per_student = static_cast<int>(runs);
  }
  if (r.has("education_level")) {
    const auto rank = r.field("education_level").integer();
    if (rank < 1 || rank > 5) r.field("education_level").fail("education level must be 1..5");
    p.education_level = EducationLevel(static_cast<int>(rank));
  }
  return p;
}

SimulationReport simulate(const QuestionBank& bank, const SelectionCriteria& criteria, int students,
                          const SimulationPolicy& policy, std::uint64_t seed) {
  if (students < 1) throw Error(ErrorCode::InvalidArgument, "at least one student is required");
  LearnerContext learner{true, policy.education_level, {}};
  const auto selection = select(bank, criteria, learner);

  SimulationReport report;
  report.students = students;
  report.item_count = selection.items.size();
  std::vector<analytics::RunEvent> log;
  for (int s = 0; s < students; ++s) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s) + 1)));
    const auto taker = "student-" + std::to_string(s + 1);
    for (int run = 0; run < policy.runs_per_student; ++run) {
      std::vector<Answer> answers;
      for (const auto& q : selection.items) {
        const bool right = unit(rng) < policy.probability(q.difficulty);
        answers.push_back({q.id, right ? correct_response(q) : wrong_response(q)});
      }
      log.push_back({taker, static_cast<std::int64_t>(s) * 1000 + run});
      if (run > 0) continue;
      const auto outcome = grade_session(bank, taker, selection.items, answers, criteria.topics);
      report.scores.push_back(outcome.overall_percent.value_or(0.0));
      for (const auto& t : outcome.topics) {
        report.topic_levels[t.topic_id][static_cast<int>(t.inferred_level) - 1] += 1;
      }
    }
  }
  double total = 0.0;
  for (double v : report.scores) total += v;
  report.mean_score = total / static_cast<double>(report.scores.size());
  report.engagement = analytics::engagement_counters(log);
  return report;
}

Json to_json(const SimulationReport& r) {
  Json levels = Json::object();
  for (const auto& [topic, counts] : r.topic_levels) {
    levels[topic] = Json{{"low", counts[0]}, {"good", counts[1]}, {"high", counts[2]}};
  }
  return Json{{"students", r.students},
              {"item_count", r.item_count},
              {"mean_score", r.mean_score},
              {"scores", r.scores},
              {"topic_levels", levels},
              {"engagement", Json{{"unique_takers", r.engagement.unique_takers},
                                  {"total_runs", r.engagement.total_runs},
                                  {"reruns", r.engagement.reruns}}}};
}

}  // namespace assess
