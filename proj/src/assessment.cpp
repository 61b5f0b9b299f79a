#include "assess/assessment.hpp"

#include <algorithm>

namespace assess {

ItemFeedback item_feedback(const Question& question, const ItemScore& score) {
  ItemFeedback fb{question.id, score.score, score.graded, false, question.topics, {}};
  fb.correct = score.graded && score.score && *score.score >= 1.0;
  if (score.graded && !fb.correct) fb.explanations = question.explanations;
  return fb;
}

SessionReport grade_session(const QuestionBank& bank, const std::string& session_id,
                            const std::vector<Question>& items, const std::vector<Answer>& answers,
                            const std::vector<std::string>& assessed_topics) {
  std::map<std::string, const Answer*> by_question;
  for (const auto& a : answers) {
    const bool known = std::any_of(items.begin(), items.end(), [&](const Question& q) { return q.id == a.question_id; });
    if (!known) throw Error(ErrorCode::UnknownQuestion, "question '" + a.question_id + "' is not part of this session");
    by_question[a.question_id] = &a;
  }

  SessionReport report;
  report.session_id = session_id;
  std::vector<ItemScore> scores;
  for (const auto& q : items) {
    auto it = by_question.find(q.id);
    const Answer answer = it == by_question.end() ? Answer{q.id, std::nullopt} : *it->second;
    auto s = grade_item(q, answer);
    report.items.push_back(item_feedback(q, s));
    scores.push_back(std::move(s));
  }
  report.topics = aggregate_topics(bank, scores, assessed_topics);
  report.overall_percent = overall_percent(scores);
  report.weakness = weakness_report(report.topics, scores, bank);
  return report;
}

}  // namespace assess
