#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wdbo/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("wdbo");
  for (const auto& a : args) argv.push_back(a.c_str());
  return wdbo::cli::run_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_out") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
};

const std::vector<std::string> kFastRun = {
    "--duration", "20",  "--cost-model", "synthetic", "--c0", "1",
    "--c1",       "0",   "--c3",         "0",         "--grid", "16"};

std::vector<std::string> with_fast(std::vector<std::string> args) {
  args.insert(args.end(), kFastRun.begin(), kFastRun.end());
  return args;
}

}  // namespace

TEST_CASE("list exits cleanly") {
  CHECK(run_cli({"list"}) == 0);
}

TEST_CASE("run writes a trace and a summary") {
  TempDir dir("run_basic");
  const int rc = run_cli(with_fast({"run", "--bench", "eggholder", "--algo",
                                    "wdbo", "--alpha", "0.25", "--seed", "7",
                                    "--out", dir.path.string()}));
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "eggholder_wdbo_seed7.csv"));
  CHECK(fs::exists(dir.path / "eggholder_wdbo_seed7.json"));
  const std::string csv = slurp(dir.path / "eggholder_wdbo_seed7.csv");
  CHECK(csv.rfind("sim_time,x_1,y,", 0) == 0);
}

TEST_CASE("unknown names exit with status 2") {
  TempDir dir("run_unknown");
  CHECK(run_cli(with_fast({"run", "--bench", "not_a_benchmark", "--out",
                           dir.path.string()})) == 2);
  CHECK(run_cli(with_fast({"run", "--bench", "eggholder", "--algo",
                           "not_an_algo", "--out", dir.path.string()})) == 2);
}

TEST_CASE("seed sweeps aggregate the average regret") {
  TempDir dir("run_seeds");
  const int rc = run_cli(with_fast({"run", "--bench", "eggholder", "--algo",
                                    "gpucb", "--seeds", "3", "--out",
                                    dir.path.string()}));
  CHECK(rc == 0);
  for (int s = 1; s <= 3; ++s) {
    CHECK(fs::exists(dir.path /
                     ("eggholder_gpucb_seed" + std::to_string(s) + ".csv")));
  }
  const std::string agg = slurp(dir.path / "eggholder_gpucb_summary.json");
  CHECK(agg.find("\"num_seeds\": 3") != std::string::npos);
  CHECK(agg.find("mean_avg_regret") != std::string::npos);
  CHECK(agg.find("stderr_avg_regret") != std::string::npos);
}

TEST_CASE("reruns with the same config are byte-identical") {
  TempDir dir_a("rerun_a");
  TempDir dir_b("rerun_b");
  const std::vector<std::string> base = {"run",    "--bench", "eggholder",
                                         "--algo", "wdbo",    "--seed", "5"};
  auto args_a = with_fast(base);
  args_a.push_back("--out");
  args_a.push_back(dir_a.path.string());
  auto args_b = with_fast(base);
  args_b.push_back("--out");
  args_b.push_back(dir_b.path.string());
  CHECK(run_cli(args_a) == 0);
  CHECK(run_cli(args_b) == 0);
  CHECK(slurp(dir_a.path / "eggholder_wdbo_seed5.csv") ==
        slurp(dir_b.path / "eggholder_wdbo_seed5.csv"));
  CHECK(slurp(dir_a.path / "eggholder_wdbo_seed5.json") ==
        slurp(dir_b.path / "eggholder_wdbo_seed5.json"));
}

TEST_CASE("parallel jobs produce the same files as sequential runs") {
  TempDir dir_seq("jobs_seq");
  TempDir dir_par("jobs_par");
  auto args = with_fast({"run", "--bench", "eggholder", "--algo", "gpucb",
                         "--seeds", "2"});
  auto seq = args;
  seq.insert(seq.end(), {"--jobs", "1", "--out", dir_seq.path.string()});
  auto par = args;
  par.insert(par.end(), {"--jobs", "2", "--out", dir_par.path.string()});
  CHECK(run_cli(seq) == 0);
  CHECK(run_cli(par) == 0);
  for (int s = 1; s <= 2; ++s) {
    const std::string name = "eggholder_gpucb_seed" + std::to_string(s) + ".csv";
    CHECK(slurp(dir_seq.path / name) == slurp(dir_par.path / name));
  }
}

TEST_CASE("sensitivity requires two alphas and normalizes per benchmark") {
  TempDir dir("sens");
  CHECK(run_cli(with_fast({"sensitivity", "--bench", "eggholder", "--alphas",
                           "0.25", "--out", dir.path.string()})) == 2);

  const int rc = run_cli(with_fast(
      {"sensitivity", "--bench", "eggholder", "--alphas", "0", "0",
       "--seeds", "2", "--out", dir.path.string()}));
  CHECK(rc == 0);
  const std::string csv = slurp(dir.path / "sensitivity.csv");
  CHECK(csv.rfind("benchmark,alpha,mean_avg_regret,stderr_avg_regret,"
                  "normalized\n",
                  0) == 0);
  // two identical alphas give identical results; the degenerate min-max
  // range normalizes both rows to 0
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "0");
    ++rows;
  }
  CHECK(rows == 2);
  const std::string summary = slurp(dir.path / "sensitivity_summary.json");
  CHECK(summary.find("best_alpha") != std::string::npos);
}

TEST_CASE("diag-conv: oracle column agrees with the closed form in 1-d") {
  TempDir dir("diag");
  const int rc =
      run_cli({"diag-conv", "--family", "se", "--xi", "0.2", "--xj", "0.8",
               "--samples", "20000", "--grid-points", "8", "--out",
               dir.path.string()});
  CHECK(rc == 0);
  std::ifstream in(dir.path / "diag_conv.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "l_s,a_estimate,a_stderr,closed_form,oracle,rel_error,critical_l_s");
  int rows = 0;
  while (std::getline(in, line)) {
    double l_s, a_est, a_se, closed, orc, rel, crit;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &l_s,
                        &a_est, &a_se, &closed, &orc, &rel, &crit) == 7);
    CHECK(rel < 1e-6);
    CHECK(a_est >= 0.0);
    CHECK(a_est <= 1.0);
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("diag-conv: coincident points report the 1/sqrt(pi) critical scale") {
  TempDir dir("diag_same");
  const int rc =
      run_cli({"diag-conv", "--family", "se", "--xi", "0.5", "--xj", "0.5",
               "--samples", "5000", "--grid-points", "3", "--out",
               dir.path.string()});
  CHECK(rc == 0);
  std::ifstream in(dir.path / "diag_conv.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const double crit = std::stod(line.substr(line.rfind(',') + 1));
  CHECK(crit == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("unsupported diag-conv family exits with status 2") {
  CHECK(run_cli({"diag-conv", "--family", "cosine"}) == 2);
}
