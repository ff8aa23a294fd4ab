#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "t2t/baselines.hpp"
#include "t2t/oracle.hpp"
#include "t2t/scenario.hpp"
#include "t2t/simcore.hpp"

namespace t2t::testing {

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

/// Oracle-sized physical instance: two or three MRs per train, at most four
/// flows, one to three frames of at most six transmission slots.
inline ScenarioConfig tiny_config(std::mt19937_64& g) {
  ScenarioConfig c;
  const int n = uniform_int(g, 2, 3);
  const double len = uniform(g, 20.0, 50.0);
  c.trains.a.length = c.trains.b.length = len;
  c.trains.a.mr_count = c.trains.b.mr_count = n;
  c.trains.a.speed = uniform(g, 200.0, 350.0) / 3.6;
  c.trains.b.speed = c.trains.a.speed - uniform(g, 40.0, 200.0) / 3.6;
  const double dts[] = {18e-6, 1e-3, 5e-3};
  c.slot_duration = dts[uniform_int(g, 0, 2)];
  c.sched_slots = 1;
  c.tx_slots = uniform_int(g, 2, 6);
  const int frames = uniform_int(g, 1, 3);
  const int frame_slots = c.sched_slots + c.tx_slots;
  const int m = uniform_int(g, (frames - 1) * frame_slots + 1, frames * frame_slots);
  const double dv = c.trains.a.speed - c.trains.b.speed;
  c.dis = len + (m - 0.5) * dv * c.slot_duration;
  c.blockage = uniform(g, 0.0, 0.7);
  c.phase = uniform(g, 0.0, c.period_len);
  c.flow_count = uniform_int(g, 1, 4);
  const double per_slot = 24e9 * c.slot_duration;
  c.demand_min_bits = 0.3 * per_slot;
  c.demand_max_bits = 5.0 * per_slot;
  c.seed = g();
  c.rate_refresh_slots = 1;
  return c;
}

/// Full-size trains and frames with a short window so a run stays cheap.
inline ScenarioConfig short_window_config(std::mt19937_64& g) {
  ScenarioConfig c;
  c.trains.a.speed = uniform(g, 200.0, 350.0) / 3.6;
  c.trains.b.speed = c.trains.a.speed - uniform(g, 50.0, 250.0) / 3.6;
  if (c.trains.b.speed < 0.0) c.trains.b.speed = 0.0;
  c.dis = 200.0 + uniform(g, 0.0, 6.0);
  c.trains.b.initial_position = uniform(g, -1.0, 1.0) * (c.dis - 200.0);
  c.blockage = uniform(g, 0.0, 0.8);
  c.flow_count = uniform_int(g, 1, 512);
  const int ks[] = {200, 500, 1000, 2000};
  c.tx_slots = ks[uniform_int(g, 0, 3)];
  c.rate_refresh_slots = uniform_int(g, 1, 4) == 1 ? 4 : 1;
  c.seed = g();
  return c;
}

/// Frame-constant book rates for `n` MRs per train.
inline std::shared_ptr<RateMatrixModel> random_matrix_model(std::mt19937_64& g, int n, int frames,
                                                            int sched_slots, int tx_slots) {
  std::vector<Eigen::MatrixXd> rates;
  for (int t = 0; t < frames; ++t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        if (i != j && uniform(g, 0.0, 1.0) < 0.7) m(i, j) = uniform_int(g, 1, 5);
    rates.push_back(m);
  }
  return std::make_shared<RateMatrixModel>(n, rates, sched_slots, tx_slots);
}

inline Instance matrix_instance(std::shared_ptr<const LinkModel> model, int frames, int sched_slots,
                                int tx_slots, std::vector<Flow> flows) {
  Instance inst;
  inst.model = std::move(model);
  inst.window.slot_duration = 1.0;
  inst.window.sched_slots = sched_slots;
  inst.window.tx_slots = tx_slots;
  inst.window.frame_count = frames;
  inst.window.slot_count = frames * (sched_slots + tx_slots);
  inst.flows = std::move(flows);
  return inst;
}

/// Up to `max_flows` distinct cross-train flows with integer demands.
inline std::vector<Flow> random_flows(std::mt19937_64& g, int n, int max_flows, int max_demand) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      pairs.emplace_back(NodeId{Train::A, i}, NodeId{Train::B, j});
      pairs.emplace_back(NodeId{Train::B, j}, NodeId{Train::A, i});
    }
  std::shuffle(pairs.begin(), pairs.end(), g);
  std::vector<Flow> flows;
  const int count = uniform_int(g, 1, std::min<int>(max_flows, static_cast<int>(pairs.size())));
  for (int f = 0; f < count; ++f) {
    const double q = uniform_int(g, 1, max_demand);
    flows.push_back({f, pairs[f].first, pairs[f].second, q, q, {}});
  }
  return flows;
}

}  // namespace t2t::testing
