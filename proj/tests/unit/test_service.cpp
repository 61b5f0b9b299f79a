#include <doctest.h>

#include <filesystem>

#include "assess/bank_format.hpp"
#include "assess/codec.hpp"
#include "assess/service/service.hpp"
#include "assess/simulate.hpp"
#include "generators.hpp"

using namespace assess;
using namespace assess::service;

namespace {

class Harness {
 public:
  explicit Harness(std::shared_ptr<DocumentStore> store = std::make_shared<MemoryStore>()) : store_(store) {
    if (!store_->read_bank()) store_->write_bank(assess::testing::read_text(assess::testing::fixture_path("microeconomics.json")));
    ServiceOptions opts{"test-secret", [this] { return now_ += 1000; }, [this] { return "id" + std::to_string(++ids_); }};
    service = std::make_unique<AssessmentService>(store_, opts);
  }

  ApiResponse call(const std::string& method, const std::string& path, const Json& body = nullptr,
                   const std::string& token = "", const std::string& session_token = "") {
    ApiRequest r{method, path, {}, body.is_null() ? "" : body.dump()};
    if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
    if (!session_token.empty()) r.headers["x-session-token"] = session_token;
    return service->handle(r);
  }

  std::string login(const std::string& user, const std::string& password) {
    auto r = call("POST", "/api/v1/auth/login", {{"user_id", user}, {"password", password}});
    REQUIRE(r.status == 200);
    return r.body["token"].get<std::string>();
  }

  std::string student(const std::string& user, int education = 3) {
    auto r = call("POST", "/api/v1/auth/register", {{"user_id", user}, {"password", "pw-" + user}, {"education_level", education}});
    REQUIRE(r.status == 201);
    return r.body["token"].get<std::string>();
  }

  std::unique_ptr<AssessmentService> service;

 private:
  std::shared_ptr<DocumentStore> store_;
  Timestamp now_ = 1'700'000'000'000;
  int ids_ = 0;
};

Json criteria(const std::string& kind, const std::string& relation = "", const std::string& pivot = "", int count = 10) {
  Json rule{{"kind", kind}};
  if (!relation.empty()) rule["relation"] = relation;
  if (!pivot.empty()) rule["pivot"] = pivot;
  return Json{{"criteria", {{"topics", {"micro"}}, {"rule", rule}, {"count", count}}}};
}

bool mentions_key(const Json& j) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k == "key" || mentions_key(v)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (mentions_key(v)) return true;
    }
  }
  return false;
}

Json answers_for(const QuestionBank& bank, const Json& questions, bool correct) {
  Json out = Json::array();
  for (const auto& q : questions) {
    const auto& question = bank.at(q["id"].get<std::string>());
    out.push_back({{"question_id", question.id},
                   {"response", to_json(std::optional<Response>(correct ? correct_response(question)
                                                                         : wrong_response(question)))}});
  }
  return out;
}

}  // namespace

TEST_CASE("health and unknown routes") {
  Harness h;
  CHECK(h.call("GET", "/api/v1/health").status == 200);
  CHECK(h.call("GET", "/api/v1/nothing").status == 404);
  CHECK(h.call("GET", "/elsewhere").status == 404);
  const auto bad = h.call("GET", "/api/v1/topics", nullptr, "garbage");
  CHECK(bad.status == 401);
  CHECK(bad.body.contains("code"));
  CHECK(bad.body.contains("message"));
  CHECK(bad.body.contains("details"));
}

TEST_CASE("guest session returns keyless questions") {
  Harness h;
  const auto r = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "match", "medium"));
  REQUIRE(r.status == 200);
  CHECK(r.body["questions"].size() <= 10);
  CHECK(r.body["questions"].size() > 0);
  CHECK(r.body.contains("session_token"));
  for (const auto& q : r.body["questions"]) {
    CHECK_FALSE(q.contains("key"));
    CHECK_FALSE(q.contains("explanations"));
    CHECK(q["difficulty"] == "medium");
  }
  // Without the session token the session is not reachable.
  const auto id = r.body["session_id"].get<std::string>();
  CHECK(h.call("GET", "/api/v1/sessions/" + id).status == 403);
  CHECK(h.call("GET", "/api/v1/sessions/" + id, nullptr, "", r.body["session_token"]).status == 200);
}

TEST_CASE("guests cannot use profile-driven rules") {
  Harness h;
  CHECK(h.call("POST", "/api/v1/sessions", criteria("auto")).status == 403);
  CHECK(h.call("POST", "/api/v1/sessions", criteria("by_knowledge", "at_least")).status == 403);
  CHECK(h.call("POST", "/api/v1/sessions", criteria("by_knowledge", "at_least", "low")).status == 200);
}

TEST_CASE("invalid criteria and empty selections") {
  Harness h;
  CHECK(h.call("POST", "/api/v1/sessions", Json{{"criteria", {{"topics", {"micro"}}}}}).status == 400);
  CHECK(h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "sideways", "easy")).status == 400);
  CHECK(h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "match", "easy", 0)).status == 400);
  Json unknown = criteria("by_difficulty", "match", "easy");
  unknown["criteria"]["topics"] = {"nowhere"};
  CHECK(h.call("POST", "/api/v1/sessions", unknown).status == 400);
  const auto empty = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "above", "difficult"));
  CHECK(empty.status == 422);
  CHECK(empty.body["code"] == "EmptySelection");
  CHECK_FALSE(empty.body["message"].get<std::string>().empty());
  ApiRequest raw{"POST", "/api/v1/sessions", {}, "{not json"};
  CHECK(h.service->handle(raw).status == 400);
}

TEST_CASE("student auto mode equals select_auto") {
  Harness h;
  const auto token = h.student("ana", 3);
  const auto r = h.call("POST", "/api/v1/sessions", criteria("auto"), token);
  REQUIRE(r.status == 200);
  CHECK_FALSE(r.body.contains("session_token"));
  const auto direct = select_auto(*h.service->bank(), LearnerContext{true, EducationLevel(3), {}}, {"micro"}, 10);
  REQUIRE(r.body["questions"].size() == direct.items.size());
  for (std::size_t i = 0; i < direct.items.size(); ++i) CHECK(r.body["questions"][i]["id"] == direct.items[i].id);
}

TEST_CASE("all-correct submission and double submit") {
  Harness h;
  const auto token = h.student("ben");
  const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "at_least", "easy", 30), token);
  REQUIRE(s.status == 200);
  const auto id = s.body["session_id"].get<std::string>();
  const auto answers = answers_for(*h.service->bank(), s.body["questions"], true);
  CHECK(h.call("POST", "/api/v1/sessions/" + id + "/answers", Json{{"answers", answers}}, token).status == 200);
  const auto r = h.call("POST", "/api/v1/sessions/" + id + "/submit", Json::object(), token);
  REQUIRE(r.status == 200);
  CHECK(r.body["state"] == "finalized");
  for (const auto& t : r.body["report"]["topics"]) CHECK(t["percent"] == 100.0);
  CHECK(r.body["report"]["weakness"]["weaknesses"].empty());
  CHECK(r.body["report"]["weakness"]["erroneous"].empty());
  CHECK(h.call("POST", "/api/v1/sessions/" + id + "/submit", Json::object(), token).status == 409);
  CHECK(h.call("POST", "/api/v1/sessions/" + id + "/answers", Json{{"answers", answers}}, token).status == 409);

  const auto profile = h.call("GET", "/api/v1/profile", nullptr, token);
  REQUIRE(profile.status == 200);
  CHECK(profile.body["knowledge"]["micro"] == "high");
}

TEST_CASE("shape mismatch names the offending item") {
  Harness h;
  const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "at_least", "easy", 30));
  const auto id = s.body["session_id"].get<std::string>();
  const auto tok = s.body["session_token"].get<std::string>();
  const Json bad{{"answers", {{{"question_id", "q01"}, {"response", true}}}}};
  const auto r = h.call("POST", "/api/v1/sessions/" + id + "/answers", bad, "", tok);
  CHECK(r.status == 400);
  CHECK(r.body["message"].get<std::string>().find("q01") != std::string::npos);
  const Json stray{{"answers", {{{"question_id", "q30"}, {"response", 3}}}}};
  CHECK(h.call("POST", "/api/v1/sessions/" + id + "/answers", stray, "", tok).status == 400);
  CHECK(h.call("POST", "/api/v1/sessions/nope/submit", Json::object(), "", tok).status == 404);
}

TEST_CASE("mixed submission equals direct composition") {
  Harness h;
  const auto token = h.student("cy");
  const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "at_most", "medium", 12), token);
  REQUIRE(s.status == 200);
  const auto bank = h.service->bank();
  auto answers = answers_for(*bank, s.body["questions"], true);
  for (std::size_t i = 0; i < answers.size(); i += 3) {
    const auto& q = bank->at(answers[i]["question_id"].get<std::string>());
    answers[i]["response"] = to_json(std::optional<Response>(wrong_response(q)));
  }
  answers.erase(answers.size() - 1);  // one skip
  const auto id = s.body["session_id"].get<std::string>();
  const auto r = h.call("POST", "/api/v1/sessions/" + id + "/submit", Json{{"answers", answers}}, token);
  REQUIRE(r.status == 200);

  const auto c = criteria_from_json(criteria("by_difficulty", "at_most", "medium", 12)["criteria"]);
  const auto selection = select(*bank, c, LearnerContext{true, EducationLevel(3), {}});
  std::vector<Answer> direct;
  for (const auto& a : answers) {
    const auto& q = bank->at(a["question_id"].get<std::string>());
    direct.push_back({q.id, response_from_json(q, a["response"])});
  }
  const auto report = grade_session(*bank, id, selection.items, direct, c.topics);
  CHECK(r.body["report"].dump() == to_json(report).dump());
  CHECK_FALSE(mentions_key(r.body));
}

TEST_CASE("history lists sessions newest first") {
  Harness h;
  const auto token = h.student("dee");
  std::vector<std::string> ids;
  for (const auto* pivot : {"easy", "medium"}) {
    const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "match", pivot), token);
    REQUIRE(s.status == 200);
    ids.push_back(s.body["session_id"]);
    REQUIRE(h.call("POST", "/api/v1/sessions/" + ids.back() + "/submit", Json::object(), token).status == 200);
  }
  const auto r = h.call("GET", "/api/v1/history", nullptr, token);
  REQUIRE(r.status == 200);
  REQUIRE(r.body["history"].size() == 2);
  CHECK(r.body["history"][0]["session_id"] == ids[1]);
  CHECK(r.body["history"][1]["session_id"] == ids[0]);
  CHECK(r.body["history"][0]["completed_at"].get<Timestamp>() > r.body["history"][1]["completed_at"].get<Timestamp>());
}

TEST_CASE("sessions belong to their owner") {
  Harness h;
  const auto a = h.student("eve");
  const auto b = h.student("fay");
  const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "match", "easy"), a);
  const auto id = s.body["session_id"].get<std::string>();
  CHECK(h.call("GET", "/api/v1/sessions/" + id, nullptr, b).status == 403);
  CHECK(h.call("POST", "/api/v1/sessions/" + id + "/submit", Json::object(), b).status == 403);
  CHECK(h.call("GET", "/api/v1/sessions/" + id, nullptr, a).status == 200);
}

TEST_CASE("authoring role matrix") {
  Harness h;
  REQUIRE(h.service->add_user("ed", "pw-ed", Role::educator));
  REQUIRE(h.service->add_user("root", "pw-root", Role::admin));
  const auto educator = h.login("ed", "pw-ed");
  const auto admin = h.login("root", "pw-root");
  const auto student = h.student("gus");

  Json q = question_to_json(h.service->bank()->at("q01"));
  q["id"] = "q99";
  CHECK(h.call("POST", "/api/v1/questions", q).status == 401);
  CHECK(h.call("POST", "/api/v1/questions", q, student).status == 403);
  const auto before = h.service->bank()->version();
  const auto created = h.call("POST", "/api/v1/questions", q, educator);
  CHECK(created.status == 201);
  CHECK(created.body["version"].get<std::uint64_t>() > before);
  CHECK(h.call("POST", "/api/v1/questions", q, educator).status == 422);

  Json bad = q;
  bad["id"] = "q98";
  bad["key"] = "zz";
  const auto rejected = h.call("POST", "/api/v1/questions", bad, admin);
  CHECK(rejected.status == 422);
  CHECK(rejected.body["code"] == "MalformedKey");
  CHECK(rejected.body["details"][0]["code"] == "MalformedKey");

  CHECK(h.call("GET", "/api/v1/questions/q99", nullptr, educator).body["key"] == "b");
  CHECK(h.call("GET", "/api/v1/questions/q99", nullptr, student).status == 403);
  CHECK(h.call("DELETE", "/api/v1/questions/q99", nullptr, educator).status == 200);
  CHECK(h.call("GET", "/api/v1/questions/q99", nullptr, educator).status == 404);

  CHECK(h.call("POST", "/api/v1/topics", Json{{"id", "micro.supply"}, {"name", "Supply"}, {"parent", "micro"}}, educator).status == 201);
  CHECK(h.call("POST", "/api/v1/topics", Json{{"id", "x"}, {"name", "X"}}, student).status == 403);
  CHECK(h.call("PUT", "/api/v1/topics/micro", Json{{"parent", "micro.supply"}}, educator).status == 422);
  CHECK(h.call("DELETE", "/api/v1/topics/micro.demand", nullptr, educator).status == 422);
  CHECK(h.call("DELETE", "/api/v1/topics/micro.supply", nullptr, educator).status == 200);
  CHECK(h.call("GET", "/api/v1/topics").status == 200);

  CHECK(h.call("POST", "/api/v1/users", Json{{"user_id", "ed2"}, {"password", "x"}, {"role", "educator"}}, educator).status == 403);
  CHECK(h.call("POST", "/api/v1/users", Json{{"user_id", "ed2"}, {"password", "x"}, {"role", "educator"}}, admin).status == 201);
  CHECK(h.call("GET", "/api/v1/profile", nullptr, educator).status == 403);
  CHECK(h.call("GET", "/api/v1/profile").status == 401);
}

TEST_CASE("auth flows") {
  Harness h;
  h.student("hal");
  CHECK(h.call("POST", "/api/v1/auth/register", {{"user_id", "hal"}, {"password", "x"}, {"education_level", 2}}).status == 409);
  CHECK(h.call("POST", "/api/v1/auth/register", {{"user_id", "../etc"}, {"password", "x"}, {"education_level", 2}}).status == 400);
  CHECK(h.call("POST", "/api/v1/auth/register", {{"user_id", "ivy"}, {"password", "x"}, {"education_level", 9}}).status == 422);
  CHECK(h.call("POST", "/api/v1/auth/login", {{"user_id", "hal"}, {"password", "wrong"}}).status == 401);
  CHECK(h.call("POST", "/api/v1/auth/login", {{"user_id", "nobody"}, {"password", "x"}}).status == 401);
  CHECK_FALSE(h.login("hal", "pw-hal").empty());
}

TEST_CASE("guest traffic never writes profiles") {
  auto store = std::make_shared<MemoryStore>();
  Harness h(store);
  const auto token = h.student("jo");
  const auto writes = store->profile_writes();
  const auto before = store->read_profile("jo");
  for (int i = 0; i < 3; ++i) {
    const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "at_least", "easy", 5));
    const auto id = s.body["session_id"].get<std::string>();
    REQUIRE(h.call("POST", "/api/v1/sessions/" + id + "/submit", Json::object(), "", s.body["session_token"]).status == 200);
  }
  CHECK(store->profile_writes() == writes);
  CHECK(store->read_profile("jo") == before);
  CHECK(store->read_runs().size() == 3);
}

TEST_CASE("file store persists across restarts") {
  const auto dir = std::filesystem::temp_directory_path() / ("assess-store-" + random_hex(6));
  {
    Harness h(std::make_shared<FileStore>(dir));
    const auto token = h.student("kim");
    const auto s = h.call("POST", "/api/v1/sessions", criteria("by_difficulty", "match", "easy"), token);
    REQUIRE(h.call("POST", "/api/v1/sessions/" + s.body["session_id"].get<std::string>() + "/submit", Json::object(), token).status == 200);
  }
  {
    Harness h(std::make_shared<FileStore>(dir));
    const auto token = h.login("kim", "pw-kim");
    const auto r = h.call("GET", "/api/v1/history", nullptr, token);
    CHECK(r.body["history"].size() == 1);
    CHECK(h.service->bank()->questions().size() == 30);
  }
  CHECK(std::filesystem::exists(dir / "runs.jsonl"));
  CHECK(std::filesystem::exists(dir / "profiles" / "kim.json"));
  std::filesystem::remove_all(dir);
}
