#include "tchm_cli/cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace tchm::cli {

using nlohmann::json;

namespace {

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(what + ": not a number: " + s);
  return v;
}

bool has_option(const std::string& id, const std::string& key) {
  for (const auto& o : scenario_info(id).options)
    if (o.name == key) return true;
  return false;
}

cplx parse_amplitude(const json& a) {
  if (a.is_number()) return a.get<double>();
  if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number())
    return {a[0].get<double>(), a[1].get<double>()};
  throw ConfigError("amplitude must be a number or [re, im]");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {"scenario", "id", "params", "options", "t_max", "dt", "samples", "initial"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key: " + k);
  }
  ScenarioConfig c;
  try {
    if (j.contains("scenario")) c.id = j["scenario"].get<std::string>();
    else if (j.contains("id")) c.id = j["id"].get<std::string>();
    else throw ConfigError("config needs a \"scenario\" entry");
    scenario_info(c.id);
    if (j.contains("params"))
      for (const auto& [k, v] : j["params"].items()) c.params[k] = v.get<double>();
    if (j.contains("options"))
      for (const auto& [k, v] : j["options"].items()) c.options[k] = v.get<std::string>();
    if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
    if (j.contains("dt")) c.dt = j["dt"].get<double>();
    if (j.contains("samples")) c.samples = j["samples"].get<std::size_t>();
    if (j.contains("initial"))
      for (const auto& t : j["initial"]) {
        StateTerm st;
        st.amplitude = t.contains("amplitude") ? parse_amplitude(t["amplitude"]) : cplx(1.0);
        st.registers = t.at("registers").get<std::vector<int>>();
        c.initial.push_back(std::move(st));
      }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  } catch (const ScenarioError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got " + assignment);
  std::string key = assignment.substr(0, eq), value = assignment.substr(eq + 1);
  if (has_option(cfg.id, key)) cfg.options[key] = value;
  else cfg.params[key] = parse_number(value, key);
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void write_csv(std::ostream& os, const RunResult& r) {
  for (std::size_t j = 0; j < r.columns.size(); ++j) os << (j ? "," : "") << r.columns[j];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(row[j]);
    os << '\n';
  }
}

void write_report(std::ostream& os, const RunResult& r, double wall) {
  os << "scenario: " << r.id << '\n';
  for (const auto& [k, v] : r.params) os << "  param " << k << " = " << format_double(v) << '\n';
  for (const auto& [k, v] : r.options) os << "  option " << k << " = " << v << '\n';
  os << "wall time: " << format_double(wall) << " s\n";
  if (!r.rows.empty()) {
    os << "final:";
    for (std::size_t j = 0; j < r.columns.size(); ++j) os << ' ' << r.columns[j] << '=' << format_double(r.rows.back()[j]);
    os << '\n';
  }
  for (const auto& c : r.checks)
    os << (c.pass() ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
       << (c.upper ? " <= " : " >= ") << format_double(c.threshold) << '\n';
}

void write_catalog(std::ostream& os) {
  for (const auto& s : scenario_catalog()) {
    os << s.id << "  " << s.summary << '\n';
    for (const auto& p : s.params) os << "    " << p.name << " = " << format_double(p.value) << "  (" << p.help << ")\n";
    for (const auto& o : s.options) {
      os << "    " << o.name << " = " << o.value << "  {";
      for (std::size_t k = 0; k < o.choices.size(); ++k) os << (k ? "|" : "") << o.choices[k];
      os << "}\n";
    }
    os << "    t_max = " << format_double(s.t_max) << ", samples = " << s.samples << '\n';
  }
}

int verify(const std::string& suite, std::ostream& os) {
  std::vector<Check> checks;
  if (suite == "darkstates" || suite == "all") {
    auto d = verify_darkstates();
    checks.insert(checks.end(), d.begin(), d.end());
  }
  if (suite == "dynamics" || suite == "all") {
    auto d = verify_dynamics();
    checks.insert(checks.end(), d.begin(), d.end());
  }
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass();
    os << (c.pass() ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
       << (c.upper ? " <= " : " >= ") << format_double(c.threshold) << '\n';
  }
  return ok ? kOk : kInvariant;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tchm: cavity models with chemical modifications"};
  app.require_subcommand(1);

  std::string target, out_path;
  std::vector<std::string> sets;
  std::optional<double> dt, t_max;
  std::optional<std::size_t> samples;
  auto* run_cmd = app.add_subcommand("run", "run a scenario (built-in id or JSON config file) and write CSV");
  run_cmd->add_option("target", target, "scenario id or config file")->required();
  run_cmd->add_option("--set", sets, "override key=value (repeatable)");
  run_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  run_cmd->add_option("--dt", dt, "time step");
  run_cmd->add_option("--t-max", t_max, "final time");
  run_cmd->add_option("--samples", samples, "number of sample intervals");

  app.add_subcommand("list", "list built-in scenarios and their defaults");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "run an invariant suite");
  verify_cmd->add_option("suite", suite, "darkstates | dynamics | all")
      ->required()
      ->check(CLI::IsMember({"darkstates", "dynamics", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  if (app.got_subcommand("list")) {
    write_catalog(out);
    return kOk;
  }
  if (app.got_subcommand("verify")) return verify(suite, out);

  ScenarioConfig cfg;
  try {
    bool is_file = std::filesystem::is_regular_file(target) || target.ends_with(".json");
    if (is_file) {
      cfg = load_config(target);
    } else {
      scenario_info(target);
      cfg.id = target;
    }
    for (const auto& s : sets) apply_override(cfg, s);
    if (dt) cfg.dt = *dt;
    if (t_max) cfg.t_max = *t_max;
    if (samples) cfg.samples = *samples;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    res = run_scenario(cfg);
  } catch (const StabilityError& e) {
    err << "integration failure: " << e.what() << " (suggested --dt " << format_double(e.suggested_dt) << ")\n";
    return kIntegration;
  } catch (const IntegrationError& e) {
    err << "integration failure: " << e.what() << '\n';
    return kIntegration;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (out_path.empty()) {
    write_csv(out, res);
    write_report(err, res, wall);
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write " << out_path << '\n';
      return kUsage;
    }
    write_csv(f, res);
    write_report(out, res, wall);
  }
  return res.all_pass() ? kOk : kInvariant;
}

}  // namespace tchm::cli
