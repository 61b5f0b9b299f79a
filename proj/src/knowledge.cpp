#include "assess/knowledge.hpp"

#include <algorithm>

namespace assess {

LearnerProfile update_profile(LearnerProfile profile, const SessionResults& session) {
  if (!session.finalized) {
    throw Error(ErrorCode::SessionNotFinal, "session '" + session.session_id + "' is not finalized");
  }
  if (!profile.history.empty() && session.completed_at <= profile.history.back().completed_at) {
    throw Error(ErrorCode::InvalidArgument, "session '" + session.session_id + "' completes before the latest history entry");
  }
  SessionRecord record{session.session_id, session.completed_at, session.criteria, session.results, {}};
  for (const auto& r : session.results) {
    const auto level = infer_level(r.percent);
    record.levels[r.topic_id] = level;
    profile.knowledge[r.topic_id] = level;
  }
  profile.history.push_back(std::move(record));
  return profile;
}

LearnerContext learner_context(const LearnerProfile& profile) {
  return LearnerContext{true, profile.education_level, profile.knowledge};
}

std::vector<WeaknessEntry> WeaknessReport::weaknesses() const {
  std::vector<WeaknessEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const auto& e) { return e.weak; });
  return out;
}

WeaknessReport weakness_report(const std::vector<TopicResult>& results) {
  WeaknessReport report;
  for (const auto& r : results) {
    const auto level = infer_level(r.percent);
    report.entries.push_back({r.topic_id, r.percent, level, level == KnowledgeLevel::low});
  }
  std::sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
    if (a.percent != b.percent) return a.percent < b.percent;
    return a.topic_id < b.topic_id;
  });
  return report;
}

WeaknessReport weakness_report(const std::vector<TopicResult>& results, const std::vector<ItemScore>& scores,
                               const QuestionBank& bank) {
  auto report = weakness_report(results);
  for (const auto& s : scores) {
    if (!s.graded || !s.score || *s.score >= 1.0) continue;
    report.erroneous.push_back({s.question_id, *s.score, bank.at(s.question_id).topics});
  }
  return report;
}

}  // namespace assess
