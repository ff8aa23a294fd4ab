#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "t2t/baselines.hpp"
#include "t2t/scenario.hpp"

namespace t2t {

struct FrameMetrics {
  std::int64_t frame = 0;
  int completed = 0;
  double delivered_bits = 0.0;
};

struct Metrics {
  int completed_flows = 0;
  double delivered_bits = 0.0;
  double throughput_bps = 0.0;  ///< delivered_bits / (M * slot_duration)
  std::int64_t frames = 0;
  std::int64_t slots = 0;  ///< M
  std::vector<FrameMetrics> per_frame;
};

struct RunRecord {
  Metrics metrics;
  std::vector<FrameSchedule> frames;  ///< kept only when requested
};

/// Plays the scenario with `policy`, validating every frame as it is
/// produced. Throws InvariantError on the first violation.
RunRecord run(const Scenario& scenario, PolicyId policy, bool keep_frames = false);
Metrics run_metrics(const Scenario& scenario, PolicyId policy);

enum class Axis { none, dis, v_b, v_a, offset, blockage, flows };

std::string to_string(Axis a);
/// Throws ConfigError for unknown names.
Axis parse_axis(const std::string& name);

/// Sets the swept parameter. Speeds are in km/h; v_a keeps the base speed
/// difference; offset places train B's front at train A's front plus value.
void apply_axis(ScenarioConfig& config, Axis axis, double value);

struct SweepRow {
  Axis axis = Axis::none;
  double value = 0.0;
  std::uint64_t seed = 0;
  PolicyId policy = PolicyId::heuristic;
  Metrics metrics;
};

/// Worker count from T2T_THREADS, else the hardware concurrency.
int default_threads();

/// Every (value, seed) cell runs all `policies` on one scenario. Rows are
/// ordered by value, seed, then policy regardless of `threads`.
std::vector<SweepRow> sweep(const ScenarioConfig& base, Axis axis, const std::vector<double>& values,
                            const std::vector<std::uint64_t>& seeds, const std::vector<PolicyId>& policies,
                            int threads);

inline constexpr const char* kCsvHeader =
    "axis,value,seed,policy,completed_flows,delivered_bits,throughput_bps,frames,slots";

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Seed-mean completed flows per axis value for one policy, in value order.
std::vector<double> mean_completed(const std::vector<SweepRow>& rows, PolicyId policy);

/// Whether `series` follows the direction with at most one adjacent
/// inversion, and that one smaller than `tolerance` relative to the larger value.
bool monotone_within(const std::vector<double>& series, bool increasing, double tolerance = 0.02);

}  // namespace t2t
