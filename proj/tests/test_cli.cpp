#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("dyncoh_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI inside the scratch directory so default outputs land there.
CmdResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = "cd " + work_dir().string() + " && " + env + " " +
                          DYNCOH_CLI_PATH + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) output += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Extracts the number following "name ... = " on its line of the report.
double printed_value(const std::string& output, const std::string& name) {
  const auto pos = output.find(name);
  REQUIRE(pos != std::string::npos);
  const auto eq = output.find('=', pos);
  REQUIRE(eq != std::string::npos);
  return std::stod(output.substr(eq + 1));
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("exit codes: bad input is 2, success is 0") {
  CHECK(run_cli("measure missing_file.chan").exit_code == 2);
  CHECK(run_cli("measure dephasing --method sdp-diamond").exit_code == 0);
  CHECK(run_cli("measure dephasing --method not-a-method").exit_code == 2);
  CHECK(run_cli("sweep --steps 1 --out x.csv").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("measure: free channel scores zero, reports are written") {
  const CmdResult r =
      run_cli("measure dephasing --method sdp-diamond --out deph.json");
  REQUIRE(r.exit_code == 0);
  CHECK(std::abs(printed_value(r.output, "value")) <= 1e-6);
  CHECK(r.output.find("gap") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(work_dir() / "deph.json"));
  CHECK(report["command"] == "measure");
  CHECK(std::abs(report["value"].get<double>()) <= 1e-6);
  CHECK(report["gap"].get<double>() <= 1e-6);

  const auto manifest =
      nlohmann::json::parse(slurp(work_dir() / "deph.manifest.json"));
  CHECK(manifest["command"] == "measure");
  CHECK(manifest["tool_version"].is_string());
  CHECK(manifest["seed"].is_number());
  CHECK(manifest["parameters"].is_object());
  REQUIRE(manifest["outputs"].is_array());
  CHECK(manifest["outputs"][0] == "deph.json");
}

TEST_CASE("measure: closed form cross-checks against the optimizer") {
  const CmdResult r = run_cli(
      "measure ad:0.5 --method closed-form --mode post --out cf.json");
  REQUIRE(r.exit_code == 0);
  CHECK(std::abs(printed_value(r.output, "value") - 0.18033988749894903) <
        1e-9);
  CHECK(r.output.find("cross-check") != std::string::npos);
  CHECK(r.output.find("WARNING") == std::string::npos);
  const auto report = nlohmann::json::parse(slurp(work_dir() / "cf.json"));
  CHECK(std::abs(report["cross_check_optimize"].get<double>() -
                 report["value"].get<double>()) < 1e-4);
}

TEST_CASE("measure: closed form post mode requires amplitude damping") {
  const CmdResult r =
      run_cli("measure hadamard --method closed-form --mode post");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("amplitude damping") != std::string::npos);
}

TEST_CASE("measure: conflicting measure/method flags are rejected") {
  const CmdResult r =
      run_cli("measure ad:0.5 --method closed-form --measure l1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("sdp-example reports both variants and the matching one") {
  const CmdResult r = run_cli("sdp-example --out example.json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("variant paper") != std::string::npos);
  CHECK(r.output.find("variant strict") != std::string::npos);
  CHECK(r.output.find("matched by variant: paper") != std::string::npos);
  const auto report =
      nlohmann::json::parse(slurp(work_dir() / "example.json"));
  CHECK(std::abs(report["paper"]["value"].get<double>() - 0.186758) <= 1e-3);
  CHECK(report["paper"]["gap"].get<double>() <= 1e-6);
  CHECK(report["strict"]["gap"].get<double>() <= 1e-6);
  CHECK(report["strict"]["value"].get<double>() >=
        report["paper"]["value"].get<double>() - 1e-8);
}

TEST_CASE("sweep: row count, header, endpoints, ordering, determinism") {
  const CmdResult r = run_cli(
      "sweep --channel ad --eta-from 0 --eta-to 1 --steps 11 --out s.csv "
      "--plot s.svg --seed 3");
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(work_dir() / "s.csv");
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 12);  // header + 11 rows
  CHECK(lines[0] == "eta,t_post,t_nonpost");
  CHECK(csv.back() == '\n');
  CHECK(lines[1] == "0,0,0");
  double prev_eta = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    double eta, tp, tn;
    REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf,%lf", &eta, &tp, &tn) == 3);
    CHECK(eta > prev_eta);
    prev_eta = eta;
    CHECK(tp >= tn - 1e-8);
  }
  double eta1, tp1, tn1;
  std::sscanf(lines.back().c_str(), "%lf,%lf,%lf", &eta1, &tp1, &tn1);
  CHECK(eta1 == 1.0);
  CHECK(tp1 == 0.5);

  const CmdResult again = run_cli(
      "sweep --channel ad --eta-from 0 --eta-to 1 --steps 11 --out s2.csv "
      "--seed 3");
  REQUIRE(again.exit_code == 0);
  CHECK(slurp(work_dir() / "s2.csv") == csv);

  CHECK(slurp(work_dir() / "s.svg").find("<svg") != std::string::npos);
  const auto manifest =
      nlohmann::json::parse(slurp(work_dir() / "s.manifest.json"));
  REQUIRE(manifest["outputs"].size() == 2);
}

TEST_CASE("discriminate: value, error bars, machine-readable report") {
  const CmdResult r = run_cli(
      "discriminate id dephasing --trials 20000 --seed 11 --out disc.json");
  REQUIRE(r.exit_code == 0);
  const double optimal = printed_value(r.output, "optimal success");
  CHECK(std::abs(optimal - 0.75) < 1e-6);
  const double rate = printed_value(r.output, "empirical success");
  const double stderr_val = printed_value(r.output, "standard error");
  CHECK(std::abs(rate - 0.75) <= 5.0 * stderr_val);
  const auto report = nlohmann::json::parse(slurp(work_dir() / "disc.json"));
  CHECK(report["trials"] == 20000);
  CHECK(std::abs(report["z_score"].get<double>()) < 5.0);
}

TEST_CASE("seed: environment variable is the default, flag wins") {
  const CmdResult env_run =
      run_cli("discriminate id ad:0.4 --trials 5000", "DYNCOH_SEED=21");
  const CmdResult flag_run =
      run_cli("discriminate id ad:0.4 --trials 5000 --seed 21");
  REQUIRE(env_run.exit_code == 0);
  REQUIRE(flag_run.exit_code == 0);
  CHECK(printed_value(env_run.output, "empirical success") ==
        printed_value(flag_run.output, "empirical success"));

  const CmdResult flag_beats_env = run_cli(
      "discriminate id ad:0.4 --trials 5000 --seed 1", "DYNCOH_SEED=21");
  const CmdResult plain =
      run_cli("discriminate id ad:0.4 --trials 5000 --seed 1");
  CHECK(printed_value(flag_beats_env.output, "empirical success") ==
        printed_value(plain.output, "empirical success"));
}

TEST_CASE("measure accepts a channel written to a file") {
  const fs::path chan = work_dir() / "file_channel.chan";
  std::ofstream out(chan);
  out << "{\"dim_in\":2,\"dim_out\":2,\"kraus\":[[[[0,0],[1,0]],[[1,0],[0,0]]]"
         "]}";  // the X unitary
  out.close();
  const CmdResult r = run_cli("measure " + chan.filename().string() +
                              " --method sdp-diamond");
  REQUIRE(r.exit_code == 0);
  CHECK(std::abs(printed_value(r.output, "value")) <= 1e-6);
}
