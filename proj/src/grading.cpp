#include "assess/grading.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>

namespace assess {

namespace {

[[noreturn]] void mismatch(const Question& q, const std::string& what) {
  throw Error(ErrorCode::ShapeMismatch, "answer to '" + q.id + "': " + what,
              {{ErrorCode::ShapeMismatch, q.id, what}});
}

template <class T>
const T& expect(const Question& q, const Response& r) {
  const auto* p = std::get_if<T>(&r);
  if (!p) mismatch(q, std::string("response shape does not fit a ") + std::string(to_string(q.type())) + " question");
  return *p;
}

std::set<std::string> ids_of(const std::vector<Option>& opts) {
  std::set<std::string> out;
  for (const auto& o : opts) out.insert(o.id);
  return out;
}

std::string normalize(std::string_view s) {
  auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  std::string out;
  for (auto it = first; it < last; ++it) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(*it))));
  return out;
}

double fraction(std::size_t correct, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

// Fraction of `key` entries reproduced by `pairs`; every pair must use
// declared ids on both sides.
double score_assignment(const Question& q, const std::map<std::string, std::string>& key,
                        const std::map<std::string, std::string>& pairs, const std::set<std::string>& from,
                        const std::function<bool(const std::string&, const std::string&)>& valid_target) {
  std::size_t correct = 0;
  for (const auto& [k, v] : pairs) {
    if (!from.contains(k)) mismatch(q, "unknown id '" + k + "'");
    if (!valid_target(k, v)) mismatch(q, "'" + k + "' assigned to unknown id '" + v + "'");
    auto it = key.find(k);
    if (it != key.end() && it->second == v) ++correct;
  }
  return fraction(correct, key.size());
}

double score(const Question& q, const MultipleChoice& c, const Response& r) {
  const auto& chosen = expect<ChosenOption>(q, r).option;
  if (!ids_of(c.options).contains(chosen)) mismatch(q, "unknown option '" + chosen + "'");
  return chosen == c.key ? 1.0 : 0.0;
}

double score(const Question& q, const MultipleResponse& c, const Response& r) {
  const auto& chosen = expect<ChosenOptions>(q, r).options;
  const auto declared = ids_of(c.options);
  const std::set<std::string> key(c.key.begin(), c.key.end());
  std::set<std::string> selected;
  for (const auto& id : chosen) {
    if (!declared.contains(id)) mismatch(q, "unknown option '" + id + "'");
    if (!selected.insert(id).second) mismatch(q, "option '" + id + "' selected twice");
  }
  long hits = 0;
  long misses = 0;
  for (const auto& id : selected) (key.contains(id) ? hits : misses) += 1;
  return std::max(0.0, static_cast<double>(hits - misses) / static_cast<double>(key.size()));
}

double score(const Question& q, const TrueFalse& c, const Response& r) {
  return expect<TruthValue>(q, r).value == c.key ? 1.0 : 0.0;
}

double score(const Question& q, const FillBlanks& c, const Response& r) {
  const auto& fills = expect<BlankFills>(q, r).fills;
  std::size_t correct = 0;
  for (const auto& [id, text] : fills) {
    auto it = c.key.find(id);
    if (it == c.key.end()) mismatch(q, "unknown blank '" + id + "'");
    const auto given = normalize(text);
    if (std::any_of(it->second.begin(), it->second.end(),
                    [&](const std::string& accepted) { return normalize(accepted) == given; })) {
      ++correct;
    }
  }
  return fraction(correct, c.blanks.size());
}

double score(const Question& q, const Matching& c, const Response& r) {
  const auto right = ids_of(c.right);
  return score_assignment(q, c.key, expect<Assignment>(q, r).pairs, ids_of(c.left),
                          [&](const std::string&, const std::string& v) { return right.contains(v); });
}

double score(const Question& q, const Sequence& c, const Response& r) {
  const auto& order = expect<Ordering>(q, r).order;
  const auto declared = ids_of(c.items);
  if (order.size() > c.key.size()) mismatch(q, "ordering longer than the item list");
  std::set<std::string> seen;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!declared.contains(order[i])) mismatch(q, "unknown item '" + order[i] + "'");
    if (!seen.insert(order[i]).second) mismatch(q, "item '" + order[i] + "' placed twice");
    if (order[i] == c.key[i]) ++correct;
  }
  return fraction(correct, c.key.size());
}

double score(const Question& q, const Hotspot& c, const Response& r) {
  const auto p = expect<Click>(q, r).at;
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) mismatch(q, "click coordinates must be finite");
  return contains(c.key, p) ? 1.0 : 0.0;
}

double score(const Question& q, const DragDrop& c, const Response& r) {
  const auto zones = ids_of(c.zones);
  return score_assignment(q, c.key, expect<Assignment>(q, r).pairs, ids_of(c.items),
                          [&](const std::string&, const std::string& v) { return zones.contains(v); });
}

double score(const Question& q, const SelectLists& c, const Response& r) {
  std::map<std::string, std::set<std::string>> options;
  std::set<std::string> lists;
  for (const auto& l : c.lists) {
    lists.insert(l.id);
    options[l.id] = ids_of(l.options);
  }
  return score_assignment(q, c.key, expect<Assignment>(q, r).pairs, lists,
                          [&](const std::string& k, const std::string& v) { return options[k].contains(v); });
}

double score(const Question& q, const Likert& c, const Response& r) {
  const auto point = expect<ScalePoint>(q, r).point;
  if (point < 1 || point > c.points) mismatch(q, "scale point outside 1.." + std::to_string(c.points));
  return 0.0;
}

}  // namespace

ItemScore grade_item(const Question& question, const Answer& answer) {
  if (answer.question_id != question.id) {
    throw Error(ErrorCode::UnknownQuestion,
                "answer for '" + answer.question_id + "' graded against '" + question.id + "'");
  }
  ItemScore out{question.id, std::nullopt, question.weight, 0.0, question.keyed()};
  double s = 0.0;
  if (answer.response) {
    s = std::visit([&](const auto& content) { return score(question, content, *answer.response); },
                   question.content);
  }
  if (out.graded) {
    out.score = s;
    out.weighted = s * question.weight;
  }
  return out;
}

std::vector<TopicResult> aggregate_topics(const QuestionBank& bank, const std::vector<ItemScore>& scores,
                                          const std::vector<std::string>& assessed) {
  const auto& h = bank.topics();
  for (const auto& t : assessed) h.at(t);

  struct Sums {
    double weighted = 0.0;
    double weight = 0.0;
    int count = 0;
  };
  std::map<std::string, Sums> sums;
  for (const auto& s : scores) {
    const auto& q = bank.at(s.question_id);
    if (!s.graded || !s.score) continue;
    std::set<std::string> attributed;
    for (const auto& t : q.topics) {
      attributed.insert(t);
      for (auto& a : h.ancestors(t)) attributed.insert(std::move(a));
    }
    for (const auto& t : attributed) {
      const bool inside = assessed.empty() || std::any_of(assessed.begin(), assessed.end(),
                                                          [&](const std::string& r) { return h.is_within(t, r); });
      if (!inside) continue;
      auto& acc = sums[t];
      acc.weighted += q.weight * *s.score;
      acc.weight += q.weight;
      acc.count += 1;
    }
  }

  std::vector<TopicResult> out;
  for (const auto& [topic, acc] : sums) {
    const double percent = std::clamp(100.0 * acc.weighted / acc.weight, 0.0, 100.0);
    out.push_back({topic, percent, acc.count, infer_level(percent)});
  }
  return out;
}

std::optional<double> overall_percent(const std::vector<ItemScore>& scores) {
  double weighted = 0.0;
  double weight = 0.0;
  for (const auto& s : scores) {
    if (!s.graded || !s.score) continue;
    weighted += s.weight * *s.score;
    weight += s.weight;
  }
  if (weight <= 0.0) return std::nullopt;
  return std::clamp(100.0 * weighted / weight, 0.0, 100.0);
}

}  // namespace assess
