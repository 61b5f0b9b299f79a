#include "assess/selection.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

namespace assess {

namespace {

using Predicate = std::function<bool(const Question&, const std::string& topic)>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, bound) from a 64-bit engine; std distributions are
// not reproducible across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void check_request(const QuestionBank& bank, const std::vector<std::string>& topics, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be at least 1");
  if (topics.empty()) throw Error(ErrorCode::InvalidArgument, "at least one topic is required");
  for (const auto& t : topics) {
    if (!bank.topics().contains(t)) throw Error(ErrorCode::UnknownTopic, "unknown topic '" + t + "'");
  }
}

// Deepest declared topic inside any requested subtree; ties go to the
// smallest id.
std::string narrowest_topic(const QuestionBank& bank, const Question& q,
                            const std::vector<std::string>& requested) {
  const auto& h = bank.topics();
  std::string best;
  int best_depth = -1;
  for (const auto& t : q.topics) {
    const bool inside = std::any_of(requested.begin(), requested.end(),
                                    [&](const std::string& r) { return h.is_within(t, r); });
    if (!inside) continue;
    const int d = h.depth(t);
    if (d > best_depth || (d == best_depth && t < best)) {
      best = t;
      best_depth = d;
    }
  }
  return best;
}

Selection run(const QuestionBank& bank, const std::vector<std::string>& topics, int count,
              std::uint64_t seed, bool include_likert, const Predicate& keep) {
  std::map<std::string, const Question*> candidates;
  for (const auto& topic : topics) {
    for (const auto& id : bank.topic_closure(topic)) {
      const auto& q = bank.at(id);
      if (!include_likert && q.type() == QuestionType::likert) continue;
      if (keep(q, topic)) candidates.emplace(id, &q);
    }
  }

  std::map<std::string, std::vector<const Question*>> clusters;
  for (const auto& [_, q] : candidates) clusters[narrowest_topic(bank, *q, topics)].push_back(q);
  for (auto& [_, items] : clusters) {
    std::sort(items.begin(), items.end(), [](const Question* a, const Question* b) {
      if (a->difficulty != b->difficulty) return a->difficulty < b->difficulty;
      return a->id < b->id;
    });
  }

  Selection out;
  out.candidate_count = candidates.size();
  const auto limit = static_cast<std::size_t>(count);

  std::vector<std::size_t> sizes;
  for (const auto& [_, items] : clusters) sizes.push_back(items.size());
  const auto quotas = allocate_proportionally(sizes, limit);

  std::size_t cluster_index = 0;
  for (const auto& [topic, items] : clusters) {
    const std::size_t take = quotas[cluster_index];
    std::vector<std::size_t> picked(items.size());
    std::iota(picked.begin(), picked.end(), 0);
    if (take < items.size()) {
      // Partial Fisher-Yates, then restore presentation order.
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(cluster_index)));
      for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + bounded(rng, items.size() - i);
        std::swap(picked[i], picked[j]);
      }
      picked.resize(take);
      std::sort(picked.begin(), picked.end());
    }
    for (auto i : picked) {
      out.items.push_back(*items[i]);
      out.clusters.push_back(topic);
    }
    ++cluster_index;
  }
  if (out.items.empty()) out.diagnostic = "no questions match the requested topics and rule";
  return out;
}

KnowledgeLevel knowledge_for(const LearnerContext& learner, const std::string& topic) {
  auto it = learner.knowledge.find(topic);
  return it == learner.knowledge.end() ? default_knowledge : it->second;
}

}  // namespace

std::vector<std::size_t> allocate_proportionally(const std::vector<std::size_t>& sizes, std::size_t count) {
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total <= count) return sizes;
  std::vector<std::size_t> quota(sizes.size());
  std::vector<std::size_t> remainder(sizes.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    quota[i] = count * sizes[i] / total;
    remainder[i] = count * sizes[i] % total;
    assigned += quota[i];
  }
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) ++quota[order[k]];
  return quota;
}

Selection select(const QuestionBank& bank, const SelectionCriteria& criteria, const LearnerContext& learner) {
  if (std::holds_alternative<AutoMode>(criteria.rule)) {
    return select_auto(bank, learner, criteria.topics, criteria.count, criteria.seed, criteria.include_likert);
  }
  check_request(bank, criteria.topics, criteria.count);

  Predicate keep;
  if (const auto* r = std::get_if<ByDifficulty>(&criteria.rule)) {
    keep = [r](const Question& q, const std::string&) { return satisfies(r->relation, q.difficulty, r->pivot); };
  } else if (const auto* r = std::get_if<ByKnowledge>(&criteria.rule)) {
    if (!r->pivot && !learner.registered) {
      throw Error(ErrorCode::MissingProfile, "knowledge rule needs a declared level or a registered profile");
    }
    keep = [r, &learner](const Question& q, const std::string& topic) {
      const auto level = r->pivot ? *r->pivot : knowledge_for(learner, topic);
      return satisfies(r->relation, q.difficulty, to_difficulty(level));
    };
  } else {
    const auto& rule = std::get<ByEducation>(criteria.rule);
    const auto pivot = rule.pivot ? rule.pivot : learner.education;
    if (!pivot) throw Error(ErrorCode::MissingProfile, "education rule needs a declared or profile education level");
    keep = [relation = rule.relation, level = *pivot](const Question& q, const std::string&) {
      return satisfies(relation, q.education_level, level);
    };
  }
  return run(bank, criteria.topics, criteria.count, criteria.seed, criteria.include_likert, keep);
}

Selection select_auto(const QuestionBank& bank, const LearnerContext& learner,
                      const std::vector<std::string>& topics, int count, std::uint64_t seed,
                      bool include_likert) {
  if (!learner.registered || !learner.education) {
    throw Error(ErrorCode::MissingProfile, "auto mode requires a registered profile");
  }
  check_request(bank, topics, count);
  const auto education = *learner.education;
  return run(bank, topics, count, seed, include_likert, [&](const Question& q, const std::string& topic) {
    return q.education_level == education && q.difficulty == to_difficulty(knowledge_for(learner, topic));
  });
}

}  // namespace assess
