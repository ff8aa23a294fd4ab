// t2t: run, sweep, oracle and validate front end.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "t2t/oracle.hpp"
#include "t2t/schedule_io.hpp"
#include "t2t/simcore.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;
constexpr int kInvariant = 3;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  long long seed = -1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Scenario file (built-in defaults when omitted)");
  cmd->add_option("--set", c.sets, "Override a key, e.g. --set frame.dis=300");
  cmd->add_option("--seed", c.seed, "Root seed (overrides run.seed)");
}

t2t::ScenarioConfig load(const Common& c) {
  t2t::KeyValueDoc doc = c.config.empty() ? t2t::KeyValueDoc::parse(t2t::default_config_text(), "defaults")
                                          : t2t::KeyValueDoc::load(c.config);
  for (const auto& s : c.sets) doc.apply_override(s);
  if (c.seed >= 0) doc.set("run.seed", std::to_string(c.seed));
  else if (c.seed != -1) throw t2t::ConfigError("--seed must be non-negative");
  return t2t::scenario_from_doc(doc);
}

std::vector<t2t::PolicyId> policies(const std::string& name, t2t::PolicyId fallback) {
  if (name.empty()) return {fallback};
  if (name == "all") return {std::begin(t2t::kAllPolicies), std::end(t2t::kAllPolicies)};
  try {
    return {t2t::parse_policy(name)};
  } catch (const std::invalid_argument& e) {
    throw t2t::ConfigError(std::string("--policy: ") + e.what());
  }
}

// Writes only after the content is complete so failures leave no file.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw t2t::ConfigError("--out: cannot write '" + path + "'");
  out << content;
}

int cmd_run(const Common& c, const std::string& policy, const std::string& out, const std::string& dump) {
  const t2t::ScenarioConfig cfg = load(c);
  const auto pols = policies(policy, cfg.policy);
  if (!dump.empty() && pols.size() != 1) throw t2t::ConfigError("--dump needs a single --policy");
  const t2t::Scenario s = t2t::build_scenario(cfg);
  std::vector<t2t::SweepRow> rows;
  std::string dump_text;
  for (t2t::PolicyId p : pols) {
    t2t::RunRecord rec = t2t::run(s, p, !dump.empty());
    rows.push_back({t2t::Axis::none, 0.0, cfg.seed, p, rec.metrics});
    if (!dump.empty()) dump_text = t2t::dump_json({s.instance.window, s.instance.flows, std::move(rec.frames)});
  }
  std::ostringstream csv;
  t2t::write_csv(csv, rows);
  if (!dump.empty()) emit(dump, dump_text);
  emit(out, csv.str());
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& policy, const std::string& out, const std::string& axis_name,
              const std::string& values_text, long long seed_count, const std::string& trend) {
  const t2t::ScenarioConfig cfg = load(c);
  const t2t::Axis axis = t2t::parse_axis(axis_name);
  const auto values = t2t::parse_value_list("--values", values_text);
  if (seed_count < 1) throw t2t::ConfigError("--seeds must be at least 1");
  if (!trend.empty() && trend != "increasing" && trend != "decreasing")
    throw t2t::ConfigError("--check-trend must be increasing or decreasing");
  std::vector<std::uint64_t> seeds;
  for (long long i = 0; i < seed_count; ++i) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
  const auto pols = policies(policy.empty() ? "all" : policy, cfg.policy);

  const auto rows = t2t::sweep(cfg, axis, values, seeds, pols, t2t::default_threads());
  std::ostringstream csv;
  t2t::write_csv(csv, rows);
  emit(out, csv.str());

  if (trend.empty()) return kOk;
  int status = kOk;
  for (t2t::PolicyId p : pols) {
    const auto series = t2t::mean_completed(rows, p);
    if (!t2t::monotone_within(series, trend == "increasing")) {
      std::cerr << "trend violated for " << t2t::to_string(p) << ":";
      for (double v : series) std::cerr << ' ' << t2t::format_number(v);
      std::cerr << '\n';
      status = kFail;
    }
  }
  return status;
}

int cmd_oracle(const Common& c) {
  const t2t::Scenario s = t2t::build_scenario(load(c));
  t2t::OracleResult best;
  try {
    best = t2t::exhaustive_optimum(s.instance);
  } catch (const t2t::OracleRefused& e) {
    std::cerr << e.what() << '\n';
    return kConfig;
  }
  const auto oracle_violations = t2t::validate_schedule(best.witness, s.instance.flows, s.instance.window);
  int heuristic = -1;
  bool heuristic_clean = true;
  try {
    heuristic = t2t::run_metrics(s, t2t::PolicyId::heuristic).completed_flows;
  } catch (const t2t::InvariantError& e) {
    std::cerr << e.what() << '\n';
    heuristic_clean = false;
  }
  std::cout << "optimum " << best.best << "\nheuristic " << heuristic << "\ngap " << best.best - heuristic
            << "\nsearch_nodes " << best.nodes << '\n';
  for (const auto& v : oracle_violations) std::cerr << "oracle witness: " << t2t::to_string(v) << '\n';
  const bool ok = oracle_violations.empty() && heuristic_clean && heuristic <= best.best;
  return ok ? kOk : kFail;
}

int cmd_validate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read '" << path << "'\n";
    return kConfig;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  t2t::ScheduleDump d;
  try {
    d = t2t::parse_json(ss.str());
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kConfig;
  }
  const auto violations = t2t::validate_schedule(d.frames, d.flows, d.window);
  for (const auto& v : violations) std::cout << t2t::to_string(v) << '\n';
  if (violations.empty()) std::cout << "ok: " << d.frames.size() << " frames\n";
  return violations.empty() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train-to-train mmWave scheduling simulator"};
  app.require_subcommand(1);

  Common run_c, sweep_c, oracle_c;
  std::string run_policy, run_out, run_dump;
  auto* run = app.add_subcommand("run", "Run one scenario and print a CSV row per policy");
  add_common(run, run_c);
  run->add_option("--policy", run_policy, "heuristic, direct, hybrid, random or all");
  run->add_option("--out", run_out, "CSV path (stdout when omitted)");
  run->add_option("--dump", run_dump, "Write the schedule as JSON");

  std::string sweep_policy, sweep_out, axis, values, trend;
  long long seeds = 1;
  auto* sw = app.add_subcommand("sweep", "Run a grid over one parameter and several seeds");
  add_common(sw, sweep_c);
  sw->add_option("--policy", sweep_policy, "heuristic, direct, hybrid, random or all (default all)");
  sw->add_option("--out", sweep_out, "CSV path (stdout when omitted)");
  sw->add_option("--axis", axis, "dis, v_b, v_a, offset, blockage or flows")->required();
  sw->add_option("--values", values, "a,b,c or lo:hi:step")->required();
  sw->add_option("--seeds", seeds, "Number of consecutive seeds starting at the root seed");
  sw->add_option("--check-trend", trend, "increasing or decreasing");

  auto* orc = app.add_subcommand("oracle", "Compare the heuristic with the exact optimum on a tiny instance");
  add_common(orc, oracle_c);

  std::string dump_path;
  auto* val = app.add_subcommand("validate", "Check a schedule dump against the problem constraints");
  val->add_option("schedule", dump_path, "JSON written by run --dump")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_c, run_policy, run_out, run_dump);
    if (*sw) return cmd_sweep(sweep_c, sweep_policy, sweep_out, axis, values, seeds, trend);
    if (*orc) return cmd_oracle(oracle_c);
    if (*val) return cmd_validate(dump_path);
  } catch (const t2t::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const t2t::InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return kInvariant;
  }
  return kConfig;
}
