#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tchm_cli/cli.hpp"

using namespace tchm;

namespace {

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tchm");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tchm_test_" + name);
}

}  // namespace

TEST(Config, ParsesAllFields) {
  ScenarioConfig c = cli::parse_config(R"({
    "scenario": "assoc",
    "params": {"g": 0.5},
    "options": {"assoc_channel": "printed"},
    "t_max": 3.0, "dt": 0.01, "samples": 30,
    "initial": [{"amplitude": [0, 1], "registers": [0, 0, 0, 1, 0]}, {"registers": [1, 0, 0, 1, 0]}]
  })");
  EXPECT_EQ(c.id, "assoc");
  EXPECT_DOUBLE_EQ(c.params.at("g"), 0.5);
  EXPECT_EQ(c.options.at("assoc_channel"), "printed");
  EXPECT_DOUBLE_EQ(*c.t_max, 3.0);
  EXPECT_DOUBLE_EQ(*c.dt, 0.01);
  EXPECT_EQ(*c.samples, 30u);
  ASSERT_EQ(c.initial.size(), 2u);
  EXPECT_EQ(c.initial[0].amplitude, cplx(0.0, 1.0));
  EXPECT_EQ(c.initial[1].amplitude, cplx(1.0));
}

TEST(Config, RejectsBadDocuments) {
  EXPECT_THROW(cli::parse_config("{"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config("[]"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(R"({"params": {}})"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(R"({"scenario": "nope"})"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(R"({"scenario": "assoc", "extra": 1})"), cli::ConfigError);
  EXPECT_THROW(cli::parse_config(R"({"scenario": "assoc", "params": {"g": "x"}})"), cli::ConfigError);
}

TEST(Overrides, OptionsAndNumbers) {
  ScenarioConfig c;
  c.id = "lambda";
  cli::apply_override(c, "seed=W");
  cli::apply_override(c, "g_W=2.5");
  EXPECT_EQ(c.options.at("seed"), "W");
  EXPECT_DOUBLE_EQ(c.params.at("g_W"), 2.5);
  EXPECT_THROW(cli::apply_override(c, "g_W"), cli::ConfigError);
  EXPECT_THROW(cli::apply_override(c, "g_W=abc"), cli::ConfigError);
}

TEST(Csv, RoundTripPrecision) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) {
    EXPECT_EQ(std::stod(cli::format_double(v)), v);
  }
  RunResult r;
  r.columns = {"t", "a"};
  r.rows = {{0.0, 1.0}, {0.5, 1.0 / 3.0}};
  std::ostringstream os;
  cli::write_csv(os, r);
  EXPECT_EQ(os.str(), "t,a\n0,1\n0.5,0.3333333333333333\n");
}

TEST(Cli, ListShowsEveryScenario) {
  auto c = invoke({"list"});
  EXPECT_EQ(c.code, 0);
  for (const auto& s : scenario_catalog()) EXPECT_NE(c.out.find(s.id), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kUsage);
  EXPECT_EQ(invoke({"run"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"run", "unknown"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"run", "assoc", "--set", "nope=1"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"verify", "bogus"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"run", temp_path("missing.json").string()}).code, cli::kUsage);
}

TEST(Cli, RunWritesCsvWithTimeColumn) {
  auto path = temp_path("assoc.csv");
  auto c = invoke({"run", "assoc", "--t-max", "5", "--samples", "10", "--out", path.string()});
  EXPECT_EQ(c.code, 0) << c.err;
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("t,a", 0), 0u);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 11);
  EXPECT_NE(c.out.find("PASS trace_drift"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, OutputIsDeterministic) {
  auto a = invoke({"run", "dissoc", "--t-max", "4", "--samples", "8"});
  auto b = invoke({"run", "dissoc", "--t-max", "4", "--samples", "8"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SweepHasRatioColumns) {
  auto c = invoke({"run", "bottleneck-sweep", "--set", "points=50", "--set", "ratio_max=10"});
  EXPECT_EQ(c.code, 0) << c.err;
  std::istringstream in(c.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "ratio,p_transform");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 50);
}

TEST(Cli, ConfigFileRun) {
  auto path = temp_path("cfg.json");
  {
    std::ofstream f(path);
    f << R"({"scenario": "bottleneck", "params": {"gamma_out": 2.0}, "t_max": 2.0, "samples": 4})";
  }
  auto c = invoke({"run", path.string()});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.err.find("gamma_out = 2"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, UnstableStepIsAnIntegrationFailure) {
  auto c = invoke({"run", "assoc", "--dt", "5"});
  EXPECT_EQ(c.code, cli::kIntegration);
  EXPECT_NE(c.err.find("suggested"), std::string::npos);
}

TEST(Cli, VerifySuites) {
  auto d = invoke({"verify", "darkstates"});
  EXPECT_EQ(d.code, 0) << d.out;
  EXPECT_NE(d.out.find("dimension_n6"), std::string::npos);
  auto y = invoke({"verify", "dynamics"});
  EXPECT_EQ(y.code, 0) << y.out;
  EXPECT_NE(y.out.find("damped_cavity"), std::string::npos);
  auto all = invoke({"verify", "all"});
  EXPECT_EQ(all.code, 0);
  EXPECT_EQ(all.out, d.out + y.out);
}
