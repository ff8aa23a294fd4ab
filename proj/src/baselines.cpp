#include "t2t/baselines.hpp"

#include <stdexcept>

namespace t2t {

std::string to_string(PolicyId p) {
  switch (p) {
    case PolicyId::heuristic: return "heuristic";
    case PolicyId::direct: return "direct";
    case PolicyId::hybrid: return "hybrid";
    case PolicyId::random: return "random";
  }
  return "?";
}

PolicyId parse_policy(const std::string& name) {
  for (PolicyId p : kAllPolicies)
    if (to_string(p) == name) return p;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

std::vector<PlannedFlow> direct_only_modes(std::span<const Flow> flows, std::int64_t frame,
                                           const Instance& inst) {
  const std::int64_t tau = inst.window.first_tx_slot(frame);
  std::vector<PlannedFlow> out;
  for (const Flow& f : flows) {
    if (!f.pending() || inst.model->direct_blocked(f.src, f.dst, tau)) continue;
    out.push_back({f.id, std::nullopt, inst.model->planning_rate(f.src, f.dst, std::nullopt, tau)});
  }
  sort_by_slots_needed(out, flows, inst.slot_duration());
  return out;
}

std::vector<PlannedFlow> hybrid_selective_modes(std::span<const Flow> flows, std::int64_t frame,
                                                const Instance& inst) {
  const std::int64_t tau = inst.window.first_tx_slot(frame);
  const std::vector<NodeId> nodes = inst.model->all_nodes();
  std::vector<PlannedFlow> out;
  for (const Flow& f : flows) {
    if (!f.pending()) continue;
    PlannedFlow best{f.id, std::nullopt, inst.model->planning_rate(f.src, f.dst, std::nullopt, tau)};
    for (NodeId v : nodes) {
      if (v == f.src || v == f.dst) continue;
      const double r = inst.model->planning_rate(f.src, f.dst, v, tau);
      if (r > best.rate) best = {f.id, v, r};
    }
    if (best.rate > 0.0) out.push_back(best);
  }
  sort_by_slots_needed(out, flows, inst.slot_duration());
  return out;
}

std::vector<PlannedFlow> random_modes(std::span<const Flow> flows, std::int64_t frame,
                                      const Instance& inst, std::mt19937_64& rng) {
  const std::int64_t tau = inst.window.first_tx_slot(frame);
  const std::vector<NodeId> nodes = inst.model->all_nodes();
  std::vector<PlannedFlow> direct, relay;
  std::bernoulli_distribution coin(0.5);
  for (const Flow& f : flows) {
    if (!f.pending()) continue;
    if (!coin(rng)) {
      direct.push_back({f.id, std::nullopt, inst.model->planning_rate(f.src, f.dst, std::nullopt, tau)});
      continue;
    }
    std::vector<NodeId> pool;
    for (NodeId v : nodes)
      if (v != f.src && v != f.dst) pool.push_back(v);
    if (pool.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const NodeId v = pool[pick(rng)];
    relay.push_back({f.id, v, inst.model->planning_rate(f.src, f.dst, v, tau)});
  }
  direct.insert(direct.end(), relay.begin(), relay.end());
  return direct;
}

PolicyRun run_policy(PolicyId policy, const Instance& inst, std::mt19937_64& rng,
                     const FrameObserver& observe) {
  inst.validate();
  PolicyRun run;
  run.flows = inst.flows;
  for (std::int64_t t = 0; t < inst.window.frame_count; ++t) {
    FrameSchedule fs;
    switch (policy) {
      case PolicyId::heuristic:
        fs = schedule_frame(select_modes(run.flows, t, inst), t, inst, run.flows);
        break;
      case PolicyId::direct:
        fs = run_transmission_phase(direct_only_modes(run.flows, t, inst), t, inst, run.flows);
        break;
      case PolicyId::hybrid:
        fs = run_transmission_phase(hybrid_selective_modes(run.flows, t, inst), t, inst, run.flows);
        break;
      case PolicyId::random:
        fs = run_transmission_phase(random_modes(run.flows, t, inst, rng), t, inst, run.flows);
        break;
    }
    run.completed += static_cast<int>(fs.completed.size());
    run.delivered_bits += fs.delivered_bits;
    if (observe) observe(fs);
    run.frames.push_back(std::move(fs));
  }
  return run;
}

}  // namespace t2t
