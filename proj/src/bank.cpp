#include "assess/bank.hpp"

namespace assess {

namespace {

[[noreturn]] void raise_first(const std::string& context, std::vector<Violation> violations) {
  const auto code = violations.front().code;
  auto message = context + ": " + violations.front().message;
  throw Error(code, message, std::move(violations));
}

}  // namespace

QuestionBank QuestionBank::from_parts(TopicHierarchy topics, std::vector<Question> questions,
                                      std::uint64_t version) {
  QuestionBank bank;
  bank.topics_ = std::move(topics);
  std::vector<Violation> violations;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto prefix = "questions[" + std::to_string(i) + "]";
    for (auto v : bank.check_question(questions[i])) {
      v.path = prefix + (v.path.empty() ? "" : "." + v.path);
      violations.push_back(std::move(v));
    }
    if (!seen.emplace(questions[i].id, i).second) {
      violations.push_back({ErrorCode::DuplicateId, prefix + ".id",
                            "duplicate question id '" + questions[i].id + "'"});
    }
  }
  if (!violations.empty()) {
    throw Error(ErrorCode::ValidationError, "invalid question bank", std::move(violations));
  }
  bank.questions_ = std::move(questions);
  bank.version_ = version;
  bank.reindex();
  return bank;
}

const Question* QuestionBank::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &questions_[it->second];
}

const Question& QuestionBank::at(const std::string& id) const {
  if (const auto* q = find(id)) return *q;
  throw Error(ErrorCode::UnknownQuestion, "unknown question '" + id + "'");
}

void QuestionBank::add_topic(TopicNode node) {
  topics_.add(std::move(node));
  ++version_;
}

void QuestionBank::move_topic(const std::string& id, std::optional<std::string> new_parent) {
  topics_.move(id, std::move(new_parent));
  ++version_;
}

void QuestionBank::rename_topic(const std::string& id, std::string name) {
  topics_.rename(id, std::move(name));
  ++version_;
}

void QuestionBank::remove_topic(const std::string& id) {
  for (const auto& q : questions_) {
    for (const auto& t : q.topics) {
      if (t == id) throw Error(ErrorCode::TopicInUse, "topic '" + id + "' is used by question '" + q.id + "'");
    }
  }
  topics_.remove(id);
  ++version_;
}

void QuestionBank::add_question(Question q) {
  auto violations = check_question(q);
  if (index_.contains(q.id)) {
    violations.insert(violations.begin(),
                      {ErrorCode::DuplicateId, "id", "question '" + q.id + "' already exists"});
  }
  if (!violations.empty()) raise_first("question '" + q.id + "'", std::move(violations));
  index_.emplace(q.id, questions_.size());
  questions_.push_back(std::move(q));
  ++version_;
}

void QuestionBank::replace_question(Question q) {
  auto it = index_.find(q.id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownQuestion, "unknown question '" + q.id + "'");
  auto violations = check_question(q);
  if (!violations.empty()) raise_first("question '" + q.id + "'", std::move(violations));
  questions_[it->second] = std::move(q);
  ++version_;
}

void QuestionBank::remove_question(const std::string& id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownQuestion, "unknown question '" + id + "'");
  questions_.erase(questions_.begin() + static_cast<std::ptrdiff_t>(it->second));
  reindex();
  ++version_;
}

std::set<std::string> QuestionBank::topic_closure(const std::string& topic_id) const {
  const auto subtree = topics_.subtree(topic_id);
  std::set<std::string> out;
  for (const auto& q : questions_) {
    for (const auto& t : q.topics) {
      if (subtree.contains(t)) {
        out.insert(q.id);
        break;
      }
    }
  }
  return out;
}

std::vector<Violation> QuestionBank::check_question(const Question& q) const {
  auto violations = validate_question(q);
  for (const auto& t : q.topics) {
    if (!topics_.contains(t)) {
      violations.push_back({ErrorCode::UnknownTopic, "topics", "unknown topic '" + t + "'"});
    }
  }
  return violations;
}

void QuestionBank::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < questions_.size(); ++i) index_.emplace(questions_[i].id, i);
}

}  // namespace assess
