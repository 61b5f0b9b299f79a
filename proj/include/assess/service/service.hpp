#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "assess/assessment.hpp"
#include "assess/bank.hpp"
#include "assess/json.hpp"
#include "assess/knowledge.hpp"
#include "assess/selection.hpp"
#include "assess/service/auth.hpp"
#include "assess/service/store.hpp"

namespace assess::service {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

enum class SessionState { created, in_progress, submitted, finalized };
std::string_view to_string(SessionState state);

struct ServiceOptions {
  std::string token_secret = "change-me";
  std::function<Timestamp()> clock;          // defaults to the system clock
  std::function<std::string()> id_source;    // defaults to random hex
};

/// The HTTP/JSON API as a transport-independent request handler. Bank
/// mutations go through a single-writer lock over immutable snapshots;
/// sessions and learner profiles are serialized per id.
class AssessmentService {
 public:
  AssessmentService(std::shared_ptr<DocumentStore> store, ServiceOptions options);

  ApiResponse handle(const ApiRequest& request);

  std::shared_ptr<const QuestionBank> bank() const;
  /// Creates a user (and, for students, an empty profile). Returns false when
  /// the id is taken.
  bool add_user(const std::string& user_id, const std::string& password, Role role,
                std::optional<EducationLevel> education = std::nullopt);

 private:
  struct Identity {
    Role role = Role::guest;
    std::string user_id;  // empty for guests
  };

  struct Session {
    std::mutex mutex;
    std::string id;
    std::optional<std::string> owner;  // learner id; guests use `guest_token`
    std::string guest_token;
    SessionState state = SessionState::created;
    SelectionCriteria criteria;
    std::shared_ptr<const QuestionBank> snapshot;
    std::vector<Question> items;
    std::map<std::string, Answer> answers;
    std::optional<SessionReport> report;
  };

  ApiResponse route(const ApiRequest& request, const Identity& who);

  ApiResponse register_user(const Json& body);
  ApiResponse login(const Json& body);
  ApiResponse create_user(const Identity& who, const Json& body);

  ApiResponse list_topics();
  ApiResponse create_topic(const Json& body);
  ApiResponse update_topic(const std::string& id, const Json& body);
  ApiResponse delete_topic(const std::string& id);
  ApiResponse list_questions();
  ApiResponse get_question(const std::string& id);
  ApiResponse create_question(const Json& body);
  ApiResponse update_question(const std::string& id, const Json& body);
  ApiResponse delete_question(const std::string& id);

  ApiResponse create_session(const Identity& who, const Json& body);
  ApiResponse get_session(const Identity& who, const ApiRequest& request, const std::string& id);
  ApiResponse post_answers(const Identity& who, const ApiRequest& request, const std::string& id, const Json& body);
  ApiResponse submit(const Identity& who, const ApiRequest& request, const std::string& id, const Json& body);

  ApiResponse get_profile(const Identity& who);
  ApiResponse get_history(const Identity& who);

  std::shared_ptr<Session> find_session(const std::string& id);
  bool owns(const Identity& who, const ApiRequest& request, const Session& session) const;
  void record_answers(Session& session, const Json& answers);

  // Copies the current snapshot, applies `mutate`, persists and publishes it.
  void mutate_bank(const std::function<void(QuestionBank&)>& mutate);

  std::optional<LearnerProfile> load_profile(const std::string& learner_id);
  void save_profile(const LearnerProfile& profile);
  std::mutex& learner_mutex(const std::string& learner_id);

  std::shared_ptr<DocumentStore> store_;
  ServiceOptions options_;
  TokenSigner signer_;

  mutable std::shared_mutex bank_mutex_;
  std::shared_ptr<const QuestionBank> bank_;

  std::mutex users_mutex_;
  UserRegistry users_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex learners_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> learner_mutexes_;
};

/// Uniform error body: {code, message, details}.
Json error_body(std::string_view code, const std::string& message, const Json& details = Json::array());

/// Learner-facing session payload: ids, state and keyless questions.
Json session_view(const std::string& session_id, std::string_view state, const std::vector<Question>& items);

}  // namespace assess::service
