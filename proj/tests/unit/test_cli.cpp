#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "assess/analytics.hpp"
#include "assess/bank_format.hpp"
#include "assess/codec.hpp"
#include "assess/service/auth.hpp"
#include "assess/simulate.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace assess;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ASSESS_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("assess-cli-" + service::random_hex(6))) { fs::create_directories(path_); }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = (path_ / name).string();
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

const std::string fixture = assess::testing::fixture_path("microeconomics.json");

}  // namespace

TEST_CASE("bank validate") {
  auto r = run("bank validate " + fixture);
  CHECK(r.exit == 0);

  TempDir tmp;
  auto doc = Json::parse(assess::testing::read_text(fixture));
  doc["questions"][0]["key"] = "zz";
  r = run("bank validate " + tmp.file("bad.json", doc.dump()));
  CHECK(r.exit == 1);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  CHECK(r.out.find("MalformedKey") != std::string::npos);

  CHECK(run("bank validate " + tmp.file("broken.json", "{")).exit == 1);
  CHECK(run("bank validate " + tmp.str() + "/missing.json").exit == 2);
}

TEST_CASE("bank import, export, validate") {
  TempDir tmp;
  CHECK(run("bank import " + fixture + " --data-dir " + tmp.str()).exit == 0);
  const auto out = tmp.file("out.json");
  CHECK(run("bank export " + out + " --data-dir " + tmp.str()).exit == 0);
  CHECK(run("bank validate " + out).exit == 0);
  CHECK(assess::testing::read_text(out) == assess::testing::read_text(fixture));
  TempDir empty;
  CHECK(run("bank export " + out + " --data-dir " + empty.str()).exit == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").exit == 2);
  CHECK(run("frobnicate").exit == 2);
  CHECK(run("ttest only-one.csv").exit == 2);
  CHECK(run("--help").exit == 0);
}

TEST_CASE("sus") {
  TempDir tmp;
  std::string rows;
  for (int i = 0; i < 10; ++i) rows += "3,3,3,3,3,3,3,3,3,3\n";
  auto r = run("sus " + tmp.file("sus.csv", rows));
  REQUIRE(r.exit == 0);
  CHECK(Json::parse(r.out)["mean"] == 50.0);
  r = run("sus " + tmp.file("hdr.csv", "q1,q2,q3,q4,q5,q6,q7,q8,q9,q10\n5,1,5,1,5,1,5,1,5,1\n"));
  CHECK(Json::parse(r.out)["mean"] == 100.0);
  CHECK(run("sus " + tmp.file("bad.csv", "3,3,3\n")).exit == 1);
  CHECK(run("sus " + tmp.file("range.csv", "9,3,3,3,3,3,3,3,3,3\n")).exit == 1);
  CHECK(run("sus " + tmp.file("empty.csv", "\n")).exit == 1);
}

TEST_CASE("ttest") {
  TempDir tmp;
  const auto a = tmp.file("a.csv", "1\n2\n3\n4\n5\n");
  const auto b = tmp.file("b.csv", "2\n3\n4\n5\n6\n");
  auto r = run("ttest " + a + " " + a);
  REQUIRE(r.exit == 0);
  CHECK(Json::parse(r.out)["p_value"] == 1.0);
  r = run("ttest " + a + " " + b);
  const auto j = Json::parse(r.out);
  const std::vector<double> va{1, 2, 3, 4, 5};
  const std::vector<double> vb{2, 3, 4, 5, 6};
  CHECK(j.dump() == [&] {
    auto expected = to_json(analytics::t_test_two_sample(va, vb));
    expected["n_a"] = 5;
    expected["n_b"] = 5;
    return expected.dump();
  }());
  r = run("ttest --welch " + a + " " + b);
  CHECK(Json::parse(r.out)["variant"] == "welch");
  CHECK(run("ttest " + a + " " + tmp.file("one.csv", "1\n")).exit == 1);
  CHECK(run("ttest " + a + " " + tmp.file("two.csv", "1,2\n3,4\n")).exit == 1);
}

TEST_CASE("engagement") {
  TempDir tmp;
  std::string log;
  for (int i = 0; i < 48; ++i) log += to_json(analytics::RunEvent{"s" + std::to_string(i % 15), i}).dump() + "\n";
  const auto r = run("engagement " + tmp.file("runs.jsonl", log));
  REQUIRE(r.exit == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["unique_takers"] == 15);
  CHECK(j["total_runs"] == 48);
  CHECK(j["reruns"] == 33);
}

TEST_CASE("simulate is deterministic and equals the library") {
  TempDir tmp;
  const Json criteria{{"topics", {"micro"}}, {"rule", {{"kind", "by_difficulty"}, {"relation", "at_least"}, {"pivot", "easy"}}}, {"count", 30}};
  const auto crit = tmp.file("criteria.json", criteria.dump());
  const auto strong = tmp.file("strong.json", R"({"correct_probability": 0.85})");
  const auto weak = tmp.file("weak.json", R"({"correct_probability": 0.65})");
  const auto base = "simulate --bank " + fixture + " --criteria " + crit + " --students 15 ";
  const auto r1 = run(base + "--policy " + strong + " --seed 7 --scores-csv " + tmp.file("a.csv"));
  const auto r2 = run(base + "--policy " + strong + " --seed 7");
  REQUIRE(r1.exit == 0);
  CHECK(r1.out == r2.out);

  const auto bank = import_bank(assess::testing::read_text(fixture));
  const auto lib = simulate(bank, criteria_from_json(criteria), 15, policy_from_json(Json::parse(R"({"correct_probability": 0.85})")), 7);
  CHECK(r1.out == to_json(lib).dump(2) + "\n");

  REQUIRE(run(base + "--policy " + weak + " --seed 8 --scores-csv " + tmp.file("b.csv")).exit == 0);
  const auto t = run("ttest " + tmp.file("a.csv") + " " + tmp.file("b.csv"));
  REQUIRE(t.exit == 0);
  std::vector<double> a, b;
  const auto strong_report = Json::parse(run(base + "--policy " + strong + " --seed 7").out);
  const auto weak_report = Json::parse(run(base + "--policy " + weak + " --seed 8").out);
  for (const auto& s : strong_report["scores"]) a.push_back(s);
  for (const auto& s : weak_report["scores"]) b.push_back(s);
  const auto oracle = assess::testing::boost_t_test(a, b, false);
  const auto got = Json::parse(t.out);
  CHECK(std::abs(got["p_value"].get<double>() - oracle.p) < 1e-9);
  CHECK(got["significant_at_0_05"].get<bool>() == (oracle.p < 0.05));

  CHECK(run(base + "--policy " + tmp.file("bad.json", R"({"correct_probability": 2})")).exit == 1);
  CHECK(run(base + "--policy " + tmp.str() + "/none.json").exit == 2);
}

TEST_CASE("user add") {
  TempDir tmp;
  CHECK(run("user add --data-dir " + tmp.str() + " --id tom --role student --password pw --education 3").exit == 0);
  CHECK(run("user add --data-dir " + tmp.str() + " --id tom --role student --password pw --education 3").exit == 1);
  CHECK(run("user add --data-dir " + tmp.str() + " --id x --role wizard --password pw").exit == 1);
  CHECK(run("user add --data-dir " + tmp.str() + " --id sam --role student --password pw").exit == 1);
  CHECK(fs::exists(fs::path(tmp.str()) / "profiles" / "tom.json"));
}
