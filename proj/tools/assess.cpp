// Operator CLI: bank maintenance, serving, simulation and the evaluation
// instruments. Exit codes: 0 success, 1 domain/validation failure,
// 2 environment or I/O failure.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "assess/analytics.hpp"
#include "assess/bank_format.hpp"
#include "assess/codec.hpp"
#include "assess/simulate.hpp"
#include "assess/service/http_server.hpp"
#include "assess/service/service.hpp"
#include "assess/service/store.hpp"

namespace {

using assess::Error;
using assess::Json;

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kIoFailure = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content) || !out.flush()) throw IoError("cannot write " + path);
}

Json read_json(const std::string& path) {
  const auto text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(assess::ErrorCode::ParseError, path + ": " + e.what());
  }
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::move(fallback);
}

void print_violations(const Error& e) {
  if (e.violations().empty()) {
    std::cout << to_string(e.code()) << ": " << e.what() << "\n";
    return;
  }
  for (const auto& v : e.violations()) {
    std::cout << v.path << ": " << to_string(v.code) << ": " << v.message << "\n";
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  return cells;
}

// Non-empty data rows; a first row that does not parse as numbers is a header.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& cell : split_csv_line(line)) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;
      throw Error(assess::ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": non-numeric value");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> read_column(const std::string& path) {
  std::vector<double> out;
  for (const auto& row : read_numeric_csv(path)) {
    if (row.size() != 1) throw Error(assess::ErrorCode::ParseError, path + ": expected a single column");
    out.push_back(row.front());
  }
  return out;
}

int bank_validate(const std::string& file) {
  const auto bank = assess::import_bank(read_file(file));
  std::cout << "ok: " << bank.topics().size() << " topics, " << bank.questions().size() << " questions\n";
  return kOk;
}

int bank_import(const std::string& file, const std::string& data_dir) {
  const auto bank = assess::import_bank(read_file(file));
  assess::service::FileStore store(data_dir);
  store.write_bank(assess::export_bank(bank));
  std::cout << "imported " << bank.questions().size() << " questions into " << data_dir << "\n";
  return kOk;
}

int bank_export(const std::string& file, const std::string& data_dir) {
  assess::service::FileStore store(data_dir);
  const auto doc = store.read_bank();
  if (!doc) throw IoError("no bank in " + data_dir);
  write_file(file, assess::export_bank(assess::import_bank(*doc)));
  return kOk;
}

int run_sus(const std::string& file) {
  std::vector<assess::analytics::SusResponse> responses;
  for (const auto& row : read_numeric_csv(file)) {
    if (row.size() != 10) throw Error(assess::ErrorCode::ParseError, file + ": each row needs 10 values");
    assess::analytics::SusResponse r{};
    for (std::size_t i = 0; i < 10; ++i) {
      if (row[i] != static_cast<int>(row[i])) throw Error(assess::ErrorCode::OutOfRange, file + ": SUS values are integers");
      r[i] = static_cast<int>(row[i]);
    }
    responses.push_back(r);
  }
  Json scores = Json::array();
  for (const auto& r : responses) scores.push_back(assess::analytics::sus_score(r));
  const double mean = assess::analytics::sus_mean(responses);
  std::cout << Json{{"respondents", responses.size()}, {"scores", scores}, {"mean", mean}}.dump(2) << "\n";
  return kOk;
}

int run_ttest(const std::string& a_file, const std::string& b_file, bool welch) {
  const auto a = read_column(a_file);
  const auto b = read_column(b_file);
  const auto result = assess::analytics::t_test_two_sample(
      a, b, welch ? assess::analytics::TTestVariant::welch : assess::analytics::TTestVariant::pooled);
  auto j = assess::to_json(result);
  j["n_a"] = a.size();
  j["n_b"] = b.size();
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int run_engagement(const std::string& file) {
  std::istringstream in(read_file(file));
  std::vector<assess::analytics::RunEvent> log;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    log.push_back(assess::run_event_from_json(Json::parse(line)));
  }
  std::cout << assess::to_json(assess::analytics::engagement_counters(log)).dump(2) << "\n";
  return kOk;
}

struct SimulateArgs {
  std::string bank, criteria, policy, scores_csv;
  int students = 15;
  std::uint64_t seed = 0;
};

int run_simulate(const SimulateArgs& args) {
  const auto bank = assess::import_bank(read_file(args.bank));
  const auto criteria = assess::criteria_from_json(read_json(args.criteria));
  const auto policy = assess::policy_from_json(read_json(args.policy));
  const auto report = assess::simulate(bank, criteria, args.students, policy, args.seed);
  if (!args.scores_csv.empty()) {
    std::ostringstream csv;
    csv << "score\n";
    for (double s : report.scores) csv << Json(s).dump() << "\n";
    write_file(args.scores_csv, csv.str());
  }
  std::cout << assess::to_json(report).dump(2) << "\n";
  return kOk;
}

struct ServeArgs {
  std::string bind = env_or("ASSESS_BIND", "127.0.0.1");
  int port = std::atoi(env_or("ASSESS_PORT", "8080").c_str());
  std::string data_dir = env_or("ASSESS_DATA_DIR", "data");
  std::string token_secret = env_or("ASSESS_TOKEN_SECRET", "");
  std::string static_dir;
};

assess::service::HttpServer* g_server = nullptr;

int run_serve(const ServeArgs& args) {
  if (args.token_secret.empty()) throw IoError("a token secret is required (--token-secret or ASSESS_TOKEN_SECRET)");
  auto store = std::make_shared<assess::service::FileStore>(args.data_dir);
  assess::service::AssessmentService service(store, {args.token_secret, {}, {}});
  assess::service::HttpServer server(service, args.static_dir.empty() ? std::nullopt
                                                                      : std::optional<std::string>(args.static_dir));
  const int port = server.bind(args.bind, args.port);
  if (port < 0) throw IoError("cannot bind " + args.bind + ":" + std::to_string(args.port));
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cerr << "listening on " << args.bind << ":" << port << "\n";
  server.listen();
  g_server = nullptr;
  return kOk;
}

struct UserArgs {
  std::string data_dir = env_or("ASSESS_DATA_DIR", "data");
  std::string id, role, password;
  int education = 0;
};

int run_user_add(const UserArgs& args) {
  const auto role = assess::service::parse_role(args.role);
  if (!role) throw Error(assess::ErrorCode::InvalidArgument, "unknown role '" + args.role + "'");
  auto store = std::make_shared<assess::service::FileStore>(args.data_dir);
  assess::service::AssessmentService service(store, {"unused", {}, {}});
  std::optional<assess::EducationLevel> education;
  if (args.education != 0) education = assess::EducationLevel(args.education);
  if (!service.add_user(args.id, args.password, *role, education)) {
    throw Error(assess::ErrorCode::DuplicateId, "user '" + args.id + "' already exists");
  }
  std::cout << "added " << args.role << " " << args.id << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-assessment platform operator tool"};
  app.require_subcommand(1);

  std::string file;
  std::string data_dir = env_or("ASSESS_DATA_DIR", "data");
  auto* bank_cmd = app.add_subcommand("bank", "Validate, import or export a bank document");
  bank_cmd->require_subcommand(1);
  auto* validate_cmd = bank_cmd->add_subcommand("validate", "Check a bank document");
  validate_cmd->add_option("file", file, "Bank document")->required();
  auto* import_cmd = bank_cmd->add_subcommand("import", "Store a bank document in the data directory");
  import_cmd->add_option("file", file, "Bank document")->required();
  import_cmd->add_option("--data-dir", data_dir, "Data directory");
  auto* export_cmd = bank_cmd->add_subcommand("export", "Write the stored bank to a file");
  export_cmd->add_option("file", file, "Output file")->required();
  export_cmd->add_option("--data-dir", data_dir, "Data directory");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--bind", serve.bind, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port");
  serve_cmd->add_option("--data-dir", serve.data_dir, "Data directory");
  serve_cmd->add_option("--token-secret", serve.token_secret, "Token signing secret");
  serve_cmd->add_option("--static-dir", serve.static_dir, "Serve a static web client from this directory");

  UserArgs user;
  auto* user_cmd = app.add_subcommand("user", "Manage accounts");
  user_cmd->require_subcommand(1);
  auto* user_add = user_cmd->add_subcommand("add", "Create an account");
  user_add->add_option("--data-dir", user.data_dir, "Data directory");
  user_add->add_option("--id", user.id, "User id")->required();
  user_add->add_option("--role", user.role, "admin, educator or student")->required();
  user_add->add_option("--password", user.password, "Password")->required();
  user_add->add_option("--education", user.education, "Education level 1..5 (students)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run scripted learners through the assessment pipeline");
  sim_cmd->add_option("--bank", sim.bank, "Bank document")->required();
  sim_cmd->add_option("--criteria", sim.criteria, "Criteria document")->required();
  sim_cmd->add_option("--policy", sim.policy, "Policy document")->required();
  sim_cmd->add_option("--students", sim.students, "Number of learners")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "Seed");
  sim_cmd->add_option("--scores-csv", sim.scores_csv, "Write per-learner scores as a one-column CSV");

  std::string sus_file;
  auto* sus_cmd = app.add_subcommand("sus", "Score SUS questionnaires (one respondent per row)");
  sus_cmd->add_option("csv", sus_file, "Responses CSV")->required();

  std::string a_file, b_file;
  bool welch = false;
  auto* ttest_cmd = app.add_subcommand("ttest", "Two-tailed two-sample t-test");
  ttest_cmd->add_option("a", a_file, "First sample (one column)")->required();
  ttest_cmd->add_option("b", b_file, "Second sample (one column)")->required();
  ttest_cmd->add_flag("--welch", welch, "Unequal-variance (Welch) variant");

  std::string runs_file;
  auto* engagement_cmd = app.add_subcommand("engagement", "Count takers and reruns in a run log");
  engagement_cmd->add_option("log", runs_file, "runs.jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoFailure;
  }

  try {
    if (*validate_cmd) return bank_validate(file);
    if (*import_cmd) return bank_import(file, data_dir);
    if (*export_cmd) return bank_export(file, data_dir);
    if (*serve_cmd) return run_serve(serve);
    if (*user_add) return run_user_add(user);
    if (*sim_cmd) return run_simulate(sim);
    if (*sus_cmd) return run_sus(sus_file);
    if (*ttest_cmd) return run_ttest(a_file, b_file, welch);
    if (*engagement_cmd) return run_engagement(runs_file);
  } catch (const Error& e) {
    print_violations(e);
    return kDomainFailure;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const assess::service::StoreError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const nlohmann::json::exception& e) {
    std::cout << "ParseError: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kOk;
}
