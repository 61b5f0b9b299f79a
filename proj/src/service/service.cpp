#include "assess/service/service.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "assess/bank_format.hpp"
#include "assess/codec.hpp"

namespace assess::service {

namespace {

ApiResponse reply(int status, Json body) { return ApiResponse{status, std::move(body)}; }

ApiResponse fail(int status, std::string_view code, const std::string& message, const Json& details = Json::array()) {
  return reply(status, error_body(code, message, details));
}

Json violations_json(const std::vector<Violation>& violations) {
  Json arr = Json::array();
  for (const auto& v : violations) {
    arr.push_back(Json{{"code", to_string(v.code)}, {"path", v.path}, {"message", v.message}});
  }
  return arr;
}

ApiResponse fail(int status, const Error& e) {
  return fail(status, to_string(e.code()), e.what(), violations_json(e.violations()));
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ShapeMismatch:
      return 400;
    case ErrorCode::MissingProfile:
      return 403;
    case ErrorCode::UnknownQuestion:
      return 404;
    case ErrorCode::SessionNotFinal:
      return 409;
    default:
      return 422;
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '/');) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

Timestamp system_now() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

const Json& require_object(const Json& body) {
  if (!body.is_object()) throw Error(ErrorCode::ParseError, "request body must be a JSON object");
  return body;
}

std::string require_string(const Json& body, const char* field) {
  require_object(body);
  auto it = body.find(field);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + field + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::created: return "created";
    case SessionState::in_progress: return "in_progress";
    case SessionState::submitted: return "submitted";
    case SessionState::finalized: return "finalized";
  }
  return "?";
}

Json error_body(std::string_view code, const std::string& message, const Json& details) {
  return Json{{"code", code}, {"message", message}, {"details", details}};
}

Json session_view(const std::string& session_id, std::string_view state, const std::vector<Question>& items) {
  Json questions = Json::array();
  for (const auto& q : items) questions.push_back(question_to_json(q, KeyVisibility::learner_view));
  return Json{{"session_id", session_id}, {"state", state}, {"questions", questions}};
}

AssessmentService::AssessmentService(std::shared_ptr<DocumentStore> store, ServiceOptions options)
    : store_(std::move(store)), options_(std::move(options)), signer_(options_.token_secret) {
  if (!options_.clock) options_.clock = system_now;
  if (!options_.id_source) options_.id_source = [] { return random_hex(12); };
  if (auto doc = store_->read_bank()) {
    bank_ = std::make_shared<const QuestionBank>(import_bank(*doc));
  } else {
    bank_ = std::make_shared<const QuestionBank>();
  }
  if (auto doc = store_->read_users()) users_ = UserRegistry::from_json(Json::parse(*doc));
}

std::shared_ptr<const QuestionBank> AssessmentService::bank() const {
  std::shared_lock lock(bank_mutex_);
  return bank_;
}

bool AssessmentService::add_user(const std::string& user_id, const std::string& password, Role role,
                                 std::optional<EducationLevel> education) {
  if (!valid_user_id(user_id)) throw Error(ErrorCode::InvalidArgument, "invalid user id '" + user_id + "'");
  if (role == Role::guest) throw Error(ErrorCode::InvalidArgument, "guests cannot be registered");
  if (role == Role::student && !education) {
    throw Error(ErrorCode::InvalidArgument, "students need an education level");
  }
  {
    std::lock_guard lock(users_mutex_);
    if (!users_.add(user_id, password, role)) return false;
    store_->write_users(users_.to_json().dump(2) + "\n");
  }
  if (role == Role::student) {
    std::lock_guard lock(learner_mutex(user_id));
    if (!load_profile(user_id)) save_profile(LearnerProfile{user_id, *education, {}, {}});
  }
  return true;
}

ApiResponse AssessmentService::handle(const ApiRequest& request) {
  try {
    Identity who;
    if (auto it = request.headers.find("authorization"); it != request.headers.end()) {
      const std::string prefix = "Bearer ";
      if (!it->second.starts_with(prefix)) return fail(401, "Unauthenticated", "expected a bearer token");
      const auto user = signer_.verify(std::string_view(it->second).substr(prefix.size()));
      std::optional<Role> role;
      if (user) {
        std::lock_guard lock(users_mutex_);
        role = users_.role_of(*user);
      }
      if (!role) return fail(401, "Unauthenticated", "invalid or expired token");
      who = Identity{*role, *user};
    }
    return route(request, who);
  } catch (const Error& e) {
    return fail(status_for(e.code()), e);
  } catch (const nlohmann::json::exception& e) {
    return fail(400, "ParseError", e.what());
  } catch (const StoreError& e) {
    return fail(500, "StorageError", e.what());
  } catch (const std::exception& e) {
    return fail(500, "InternalError", e.what());
  }
}

ApiResponse AssessmentService::route(const ApiRequest& request, const Identity& who) {
  const auto parts = split_path(request.path);
  if (parts.size() < 2 || parts[0] != "api" || parts[1] != "v1") return fail(404, "NotFound", "no such endpoint");
  const std::vector<std::string> p(parts.begin() + 2, parts.end());
  const auto& m = request.method;
  const Json body = request.body.empty() ? Json::object() : Json::parse(request.body);

  auto need_auth = [&](bool allowed) -> std::optional<ApiResponse> {
    if (who.role == Role::guest) return fail(401, "Unauthenticated", "login required");
    if (!allowed) return fail(403, "Forbidden", "role '" + std::string(to_string(who.role)) + "' may not do this");
    return std::nullopt;
  };

  if (p.size() == 1 && p[0] == "health" && m == "GET") return reply(200, Json{{"status", "ok"}});

  if (p.size() == 2 && p[0] == "auth") {
    if (p[1] == "register" && m == "POST") return register_user(body);
    if (p[1] == "login" && m == "POST") return login(body);
  }
  if (p.size() == 1 && p[0] == "users" && m == "POST") {
    if (auto denied = need_auth(who.role == Role::admin)) return *denied;
    return create_user(who, body);
  }

  if (!p.empty() && p[0] == "topics") {
    if (p.size() == 1 && m == "GET") return list_topics();
    if (auto denied = need_auth(can_author(who.role))) return *denied;
    if (p.size() == 1 && m == "POST") return create_topic(body);
    if (p.size() == 2 && m == "PUT") return update_topic(p[1], body);
    if (p.size() == 2 && m == "DELETE") return delete_topic(p[1]);
  }

  if (!p.empty() && p[0] == "questions") {
    if (auto denied = need_auth(can_author(who.role))) return *denied;
    if (p.size() == 1 && m == "GET") return list_questions();
    if (p.size() == 1 && m == "POST") return create_question(body);
    if (p.size() == 2 && m == "GET") return get_question(p[1]);
    if (p.size() == 2 && m == "PUT") return update_question(p[1], body);
    if (p.size() == 2 && m == "DELETE") return delete_question(p[1]);
  }

  if (p.size() == 1 && p[0] == "bank" && m == "GET") {
    if (auto denied = need_auth(can_author(who.role))) return *denied;
    return reply(200, bank_to_json(*bank()));
  }

  if (!p.empty() && p[0] == "sessions") {
    if (p.size() == 1 && m == "POST") return create_session(who, body);
    if (p.size() == 2 && m == "GET") return get_session(who, request, p[1]);
    if (p.size() == 3 && p[2] == "answers" && m == "POST") return post_answers(who, request, p[1], body);
    if (p.size() == 3 && p[2] == "submit" && m == "POST") return submit(who, request, p[1], body);
  }

  if (p.size() == 1 && p[0] == "profile" && m == "GET") {
    if (auto denied = need_auth(who.role == Role::student)) return *denied;
    return get_profile(who);
  }
  if (p.size() == 1 && p[0] == "history" && m == "GET") {
    if (auto denied = need_auth(who.role == Role::student)) return *denied;
    return get_history(who);
  }
  return fail(404, "NotFound", "no such endpoint");
}

ApiResponse AssessmentService::register_user(const Json& body) {
  const auto user = require_string(body, "user_id");
  const auto password = require_string(body, "password");
  if (!body.contains("education_level") || !body["education_level"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "field 'education_level' must be an integer");
  }
  const EducationLevel education(body["education_level"].get<int>());
  if (password.empty()) throw Error(ErrorCode::InvalidArgument, "password must not be empty");
  if (!add_user(user, password, Role::student, education)) {
    return fail(409, "DuplicateId", "user '" + user + "' already exists");
  }
  return reply(201, Json{{"user_id", user}, {"role", "student"}, {"token", signer_.issue(user)}});
}

ApiResponse AssessmentService::login(const Json& body) {
  const auto user = require_string(body, "user_id");
  const auto password = require_string(body, "password");
  std::optional<Role> role;
  {
    std::lock_guard lock(users_mutex_);
    role = users_.authenticate(user, password);
  }
  if (!role) return fail(401, "Unauthenticated", "unknown user or wrong password");
  return reply(200, Json{{"user_id", user}, {"role", to_string(*role)}, {"token", signer_.issue(user)}});
}

ApiResponse AssessmentService::create_user(const Identity&, const Json& body) {
  const auto user = require_string(body, "user_id");
  const auto password = require_string(body, "password");
  const auto role = parse_role(require_string(body, "role"));
  if (!role || *role == Role::guest) throw Error(ErrorCode::InvalidArgument, "role must be admin, educator or student");
  std::optional<EducationLevel> education;
  if (body.contains("education_level")) education = EducationLevel(body["education_level"].get<int>());
  if (!add_user(user, password, *role, education)) return fail(409, "DuplicateId", "user '" + user + "' already exists");
  return reply(201, Json{{"user_id", user}, {"role", to_string(*role)}});
}

ApiResponse AssessmentService::list_topics() {
  const auto snapshot = bank();
  Json topics = Json::array();
  for (const auto& n : snapshot->topics().nodes()) topics.push_back(topic_to_json(n));
  return reply(200, Json{{"version", snapshot->version()}, {"topics", topics}});
}

ApiResponse AssessmentService::create_topic(const Json& body) {
  auto node = topic_from_json(body);
  mutate_bank([&](QuestionBank& b) { b.add_topic(node); });
  return reply(201, Json{{"version", bank()->version()}, {"topic", topic_to_json(node)}});
}

ApiResponse AssessmentService::update_topic(const std::string& id, const Json& body) {
  require_object(body);
  mutate_bank([&](QuestionBank& b) {
    if (!b.topics().contains(id)) throw Error(ErrorCode::UnknownTopic, "unknown topic '" + id + "'");
    if (body.contains("name")) b.rename_topic(id, body["name"].get<std::string>());
    if (body.contains("parent")) {
      const auto& parent = body["parent"];
      b.move_topic(id, parent.is_null() ? std::nullopt : std::optional<std::string>(parent.get<std::string>()));
    }
  });
  const auto snapshot = bank();
  return reply(200, Json{{"version", snapshot->version()}, {"topic", topic_to_json(snapshot->topics().at(id))}});
}

ApiResponse AssessmentService::delete_topic(const std::string& id) {
  mutate_bank([&](QuestionBank& b) { b.remove_topic(id); });
  return reply(200, Json{{"version", bank()->version()}});
}

ApiResponse AssessmentService::list_questions() {
  const auto snapshot = bank();
  Json questions = Json::array();
  for (const auto& q : snapshot->questions()) questions.push_back(question_to_json(q));
  return reply(200, Json{{"version", snapshot->version()}, {"questions", questions}});
}

ApiResponse AssessmentService::get_question(const std::string& id) {
  return reply(200, question_to_json(bank()->at(id)));
}

ApiResponse AssessmentService::create_question(const Json& body) {
  Question q;
  mutate_bank([&](QuestionBank& b) {
    q = question_from_json(body, b);
    if (b.find(q.id)) throw Error(ErrorCode::DuplicateId, "question '" + q.id + "' already exists");
    b.add_question(q);
  });
  return reply(201, Json{{"version", bank()->version()}, {"question", question_to_json(q)}});
}

ApiResponse AssessmentService::update_question(const std::string& id, const Json& body) {
  Json patched = require_object(body);
  if (!patched.contains("id")) patched["id"] = id;
  if (patched["id"] != id) throw Error(ErrorCode::InvalidArgument, "question id does not match the path");
  Question q;
  mutate_bank([&](QuestionBank& b) {
    b.at(id);
    q = question_from_json(patched, b);
    b.replace_question(q);
  });
  return reply(200, Json{{"version", bank()->version()}, {"question", question_to_json(q)}});
}

ApiResponse AssessmentService::delete_question(const std::string& id) {
  mutate_bank([&](QuestionBank& b) { b.remove_question(id); });
  return reply(200, Json{{"version", bank()->version()}});
}

ApiResponse AssessmentService::create_session(const Identity& who, const Json& body) {
  require_object(body);
  const auto snapshot = bank();
  SelectionCriteria criteria;
  Selection selection;
  try {
    if (!body.contains("criteria")) throw Error(ErrorCode::ParseError, "missing field 'criteria'");
    criteria = criteria_from_json(body["criteria"]);
    LearnerContext learner;
    if (who.role == Role::student) {
      std::lock_guard lock(learner_mutex(who.user_id));
      if (auto profile = load_profile(who.user_id)) learner = learner_context(*profile);
    }
    selection = select(*snapshot, criteria, learner);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MissingProfile) return fail(403, e);
    return fail(400, e);
  }
  if (selection.items.empty()) {
    return fail(422, "EmptySelection", selection.diagnostic);
  }

  auto session = std::make_shared<Session>();
  session->id = options_.id_source();
  if (who.role == Role::student) {
    session->owner = who.user_id;
  } else {
    session->guest_token = options_.id_source();
  }
  session->criteria = criteria;
  session->snapshot = snapshot;
  session->items = std::move(selection.items);
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_[session->id] = session;
  }
  auto view = session_view(session->id, to_string(session->state), session->items);
  if (!session->owner) view["session_token"] = session->guest_token;
  return reply(200, std::move(view));
}

std::shared_ptr<AssessmentService::Session> AssessmentService::find_session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool AssessmentService::owns(const Identity& who, const ApiRequest& request, const Session& session) const {
  if (session.owner) return who.user_id == *session.owner;
  auto it = request.headers.find("x-session-token");
  return it != request.headers.end() && it->second == session.guest_token;
}

ApiResponse AssessmentService::get_session(const Identity& who, const ApiRequest& request, const std::string& id) {
  auto session = find_session(id);
  if (!session) return fail(404, "NotFound", "unknown session '" + id + "'");
  std::lock_guard lock(session->mutex);
  if (!owns(who, request, *session)) return fail(403, "Forbidden", "not your session");
  return reply(200, session_view(session->id, to_string(session->state), session->items));
}

void AssessmentService::record_answers(Session& session, const Json& answers) {
  if (!answers.is_array()) throw Error(ErrorCode::ParseError, "'answers' must be an array");
  std::map<std::string, Answer> parsed;
  for (const auto& a : answers) {
    const auto qid = require_string(a, "question_id");
    auto it = std::find_if(session.items.begin(), session.items.end(), [&](const Question& q) { return q.id == qid; });
    if (it == session.items.end()) {
      throw Error(ErrorCode::ShapeMismatch, "question '" + qid + "' is not part of this session",
                  {{ErrorCode::UnknownQuestion, qid, "not part of this session"}});
    }
    Answer answer{qid, response_from_json(*it, a.contains("response") ? a["response"] : Json(nullptr))};
    grade_item(*it, answer);  // shape check only
    parsed[qid] = std::move(answer);
  }
  for (auto& [qid, answer] : parsed) session.answers[qid] = std::move(answer);
}

ApiResponse AssessmentService::post_answers(const Identity& who, const ApiRequest& request, const std::string& id,
                                            const Json& body) {
  auto session = find_session(id);
  if (!session) return fail(404, "NotFound", "unknown session '" + id + "'");
  std::lock_guard lock(session->mutex);
  if (!owns(who, request, *session)) return fail(403, "Forbidden", "not your session");
  if (session->state == SessionState::submitted || session->state == SessionState::finalized) {
    return fail(409, "Conflict", "session already submitted");
  }
  require_object(body);
  if (!body.contains("answers")) throw Error(ErrorCode::ParseError, "missing field 'answers'");
  record_answers(*session, body["answers"]);
  session->state = SessionState::in_progress;
  return reply(200, Json{{"session_id", session->id}, {"state", to_string(session->state)},
                         {"answered", session->answers.size()}});
}

ApiResponse AssessmentService::submit(const Identity& who, const ApiRequest& request, const std::string& id,
                                      const Json& body) {
  auto session = find_session(id);
  if (!session) return fail(404, "NotFound", "unknown session '" + id + "'");
  std::lock_guard lock(session->mutex);
  if (!owns(who, request, *session)) return fail(403, "Forbidden", "not your session");
  if (session->state == SessionState::submitted || session->state == SessionState::finalized) {
    return fail(409, "Conflict", "session already submitted");
  }
  require_object(body);
  if (body.contains("answers")) record_answers(*session, body["answers"]);
  session->state = SessionState::in_progress;

  std::vector<Answer> answers;
  for (const auto& [_, a] : session->answers) answers.push_back(a);
  session->report = grade_session(*session->snapshot, session->id, session->items, answers, session->criteria.topics);
  session->state = SessionState::submitted;

  const auto now = options_.clock();
  if (session->owner) {
    std::lock_guard learner_lock(learner_mutex(*session->owner));
    auto profile = load_profile(*session->owner);
    if (profile) {
      const auto last = profile->history.empty() ? now - 1 : profile->history.back().completed_at;
      SessionResults results{session->id, std::max(now, last + 1), session->criteria, session->report->topics, true};
      save_profile(update_profile(std::move(*profile), results));
    }
  }
  session->state = SessionState::finalized;
  const auto taker = session->owner ? *session->owner : "guest:" + session->guest_token;
  store_->append_run(to_json(analytics::RunEvent{taker, now}).dump());

  return reply(200, Json{{"session_id", session->id}, {"state", to_string(session->state)},
                         {"report", to_json(*session->report)}});
}

ApiResponse AssessmentService::get_profile(const Identity& who) {
  std::lock_guard lock(learner_mutex(who.user_id));
  auto profile = load_profile(who.user_id);
  if (!profile) return fail(404, "NotFound", "no profile for '" + who.user_id + "'");
  auto j = to_json(*profile);
  j.erase("history");
  return reply(200, j);
}

ApiResponse AssessmentService::get_history(const Identity& who) {
  std::lock_guard lock(learner_mutex(who.user_id));
  auto profile = load_profile(who.user_id);
  if (!profile) return fail(404, "NotFound", "no profile for '" + who.user_id + "'");
  Json history = Json::array();
  for (auto it = profile->history.rbegin(); it != profile->history.rend(); ++it) history.push_back(to_json(*it));
  return reply(200, Json{{"learner_id", profile->learner_id}, {"history", history}});
}

void AssessmentService::mutate_bank(const std::function<void(QuestionBank&)>& mutate) {
  std::unique_lock lock(bank_mutex_);
  QuestionBank next = *bank_;
  mutate(next);
  store_->write_bank(export_bank(next));
  bank_ = std::make_shared<const QuestionBank>(std::move(next));
}

std::optional<LearnerProfile> AssessmentService::load_profile(const std::string& learner_id) {
  auto doc = store_->read_profile(learner_id);
  if (!doc) return std::nullopt;
  return profile_from_json(Json::parse(*doc));
}

void AssessmentService::save_profile(const LearnerProfile& profile) {
  store_->write_profile(profile.learner_id, to_json(profile).dump(2) + "\n");
}

std::mutex& AssessmentService::learner_mutex(const std::string& learner_id) {
  std::lock_guard lock(learners_mutex_);
  auto& slot = learner_mutexes_[learner_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace assess::service
