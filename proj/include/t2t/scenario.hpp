#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "t2t/baselines.hpp"
#include "t2t/channel.hpp"
#include "t2t/config.hpp"
#include "t2t/geometry.hpp"
#include "t2t/scheduler.hpp"

namespace t2t {

/// Seed of the named stream derived from a root seed.
std::uint64_t stream_seed(std::uint64_t root, std::string_view stream);
std::mt19937_64 make_stream(std::uint64_t root, std::string_view stream);

/// Book-value rates that replace the channel model: one 2N x 2N matrix per
/// frame, demands given per node pair.
struct RateMatrixSpec {
  int nodes_per_train = 0;
  Eigen::MatrixXd demand;
  std::vector<Eigen::MatrixXd> rates;
};

/// Everything needed to build a run. Speeds are stored in m/s.
struct ScenarioConfig {
  TrainPair trains{
      TrainConfig{0.0, 300.0 / 3.6, 200.0, 16, 150.0},
      TrainConfig{0.0, 150.0 / 3.6, 200.0, 16, 0.0},
  };
  RadioParams radio;
  double blockage = 0.4;
  double period_len = 50.0;
  double band_lo = 50.0;
  double band_hi = 100.0;
  std::optional<double> phase;  ///< drawn from the seed when empty

  int flow_count = 200;
  double demand_min_bits = 30e6;
  double demand_max_bits = 50e6;

  double slot_duration = 18e-6;
  int sched_slots = 48;
  int tx_slots = 2000;
  double dis = 250.0;
  int rate_refresh_slots = 1;

  PolicyId policy = PolicyId::heuristic;
  std::uint64_t seed = 1;

  std::optional<RateMatrixSpec> matrix;

  void validate() const;
};

ScenarioConfig scenario_from_doc(const KeyValueDoc& doc);
ScenarioConfig load_scenario_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// The shipped default document (Table I values).
std::string default_config_text();

struct Scenario {
  ScenarioConfig config;
  Instance instance;
  std::optional<Deployment> deployment;  ///< absent for rate-matrix runs
};

/// Draws obstacle phase and flows from the config's seed. A threshold below
/// the joint train length yields an empty window.
Scenario build_scenario(const ScenarioConfig& config);

/// The three-frame, three-MR-per-train worked example with book rates.
ScenarioConfig toy_config();

}  // namespace t2t
