#include "t2t/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace t2t {

void Instance::validate() const {
  if (!model) throw std::invalid_argument("instance has no link model");
  if (window.tx_slots < 1) throw std::invalid_argument("tx_slots must be at least 1");
  if (window.sched_slots < 0) throw std::invalid_argument("sched_slots must be non-negative");
  if (!(window.slot_duration > 0.0)) throw std::invalid_argument("slot duration must be positive");
  if (rate_refresh_slots < 1) throw std::invalid_argument("rate_refresh_slots must be at least 1");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Flow& f = flows[i];
    if (f.id != static_cast<int>(i)) throw std::invalid_argument("flow ids must equal their positions");
    if (f.src.train == f.dst.train) throw std::invalid_argument("flow ends must be on different trains");
    for (NodeId n : {f.src, f.dst})
      if (n.index < 0 || n.index >= model->mr_count(n.train))
        throw std::invalid_argument("flow end " + to_string(n) + " does not exist");
    if (!(f.demand_bits >= 0.0) || f.remaining_bits > f.demand_bits)
      throw std::invalid_argument("flow remaining bits exceed its demand");
  }
}

std::optional<PlannedFlow> select_relay(const Flow& flow, std::int64_t frame, const Instance& inst) {
  const std::int64_t tau = inst.window.first_tx_slot(frame);
  std::optional<PlannedFlow> best;
  for (NodeId c : inst.model->relay_candidates(flow.src, flow.dst, tau)) {
    if (c == flow.src || c == flow.dst) continue;
    const double r = inst.model->planning_rate(flow.src, flow.dst, c, tau);
    if (!(r > 0.0)) continue;
    if (!best || r > best->rate || (r == best->rate && c < *best->relay))
      best = PlannedFlow{flow.id, c, r};
  }
  return best;
}

ModeSelection select_modes(std::span<const Flow> flows, std::int64_t frame, const Instance& inst) {
  ModeSelection out;
  const std::int64_t first = inst.window.first_tx_slot(frame);
  const std::int64_t last = first + inst.window.tx_slots - 1;
  for (const Flow& f : flows) {
    if (!f.pending()) continue;
    Probe p{f.id, inst.model->direct_blocked(f.src, f.dst, first), false};
    if (!p.blocked_first) {
      out.direct.push_back({f.id, std::nullopt, inst.model->planning_rate(f.src, f.dst, std::nullopt, first)});
    } else {
      p.blocked_last = inst.model->direct_blocked(f.src, f.dst, last);
      if (p.blocked_last)
        if (auto r = select_relay(f, frame, inst)) out.relay.push_back(*r);
    }
    out.probes.push_back(p);
  }
  return out;
}

double slots_needed(double remaining_bits, double rate, double slot_duration) {
  if (!(rate > 0.0)) throw std::domain_error("slots_needed: rate must be positive");
  return remaining_bits / (rate * slot_duration);
}

void sort_by_slots_needed(std::vector<PlannedFlow>& plan, std::span<const Flow> flows,
                          double slot_duration) {
  auto key = [&](const PlannedFlow& p) {
    return slots_needed(flows[p.flow].remaining_bits, p.rate, slot_duration);
  };
  std::stable_sort(plan.begin(), plan.end(), [&](const PlannedFlow& a, const PlannedFlow& b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return a.flow < b.flow;
  });
}

FrameSchedule schedule_frame(const ModeSelection& selection, std::int64_t frame,
                             const Instance& inst, std::vector<Flow>& flows) {
  std::vector<PlannedFlow> fa = selection.direct;
  std::vector<PlannedFlow> fb = selection.relay;
  sort_by_slots_needed(fa, flows, inst.slot_duration());
  sort_by_slots_needed(fb, flows, inst.slot_duration());
  fa.insert(fa.end(), fb.begin(), fb.end());
  return run_transmission_phase(std::move(fa), frame, inst, flows);
}

namespace {

class Occupancy {
 public:
  explicit Occupancy(const LinkModel& m)
      : offset_b_(m.mr_count(Train::A)),
        tx_(static_cast<std::size_t>(offset_b_ + m.mr_count(Train::B)), false),
        rx_(tx_.size(), false) {}

  bool free_for(const Transmission& t) const {
    if (tx_[slot(t.src)] || rx_[slot(t.dst)]) return false;
    return !t.relay || (!tx_[slot(*t.relay)] && !rx_[slot(*t.relay)]);
  }
  void set(const Transmission& t, bool busy) {
    tx_[slot(t.src)] = busy;
    rx_[slot(t.dst)] = busy;
    if (t.relay) tx_[slot(*t.relay)] = rx_[slot(*t.relay)] = busy;
  }

 private:
  std::size_t slot(NodeId n) const {
    return static_cast<std::size_t>((n.train == Train::A ? 0 : offset_b_) + n.index);
  }
  int offset_b_;
  std::vector<bool> tx_;
  std::vector<bool> rx_;
};

}  // namespace

FrameSchedule run_transmission_phase(std::vector<PlannedFlow> order, std::int64_t frame,
                                     const Instance& inst, std::vector<Flow>& flows) {
  FrameSchedule out;
  out.frame = frame;
  out.modes = order;

  const LinkModel& model = *inst.model;
  const double dt = inst.slot_duration();
  Occupancy occ(model);
  std::vector<bool> used(order.size(), false);  // admitted once; never re-admitted this frame
  std::vector<std::size_t> active;             // indices into `order`
  std::vector<Transmission> tx;
  std::vector<double> rates;
  std::vector<bool> clear;
  bool refill = true;
  bool stale = true;
  std::int64_t computed_at = 0;

  auto transmission = [&](std::size_t i) {
    const Flow& f = flows[order[i].flow];
    return Transmission{f.id, f.src, f.dst, order[i].relay};
  };

  const std::int64_t first = inst.window.first_tx_slot(frame);
  for (std::int64_t s = first; s < first + inst.window.tx_slots; ++s) {
    if (refill) {
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (used[i] || !flows[order[i].flow].pending()) continue;
        const Transmission t = transmission(i);
        if (!occ.free_for(t)) continue;
        occ.set(t, true);
        used[i] = true;
        active.push_back(i);
        stale = true;
      }
      refill = false;
    }
    if (active.empty()) continue;

    if (!stale && s - computed_at >= inst.rate_refresh_slots) stale = true;
    if (!stale) {
      for (std::size_t a = 0; a < tx.size() && !stale; ++a)
        if (model.hops_clear(tx[a], s) != clear[a]) stale = true;
    }
    if (stale) {
      tx.clear();
      for (std::size_t i : active) tx.push_back(transmission(i));
      rates.assign(tx.size(), 0.0);
      model.realized_rates(tx, s, rates);
      clear.assign(tx.size(), false);
      for (std::size_t a = 0; a < tx.size(); ++a) clear[a] = model.hops_clear(tx[a], s);
      computed_at = s;
      stale = false;
    }

    SlotRecord rec{s, {}};
    std::vector<std::size_t> keep;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t i = active[a];
      Flow& f = flows[order[i].flow];
      const double rate = rates[a];
      const double before = f.remaining_bits;
      f.remaining_bits -= std::min(rate * dt, before);
      out.delivered_bits += before - f.remaining_bits;
      rec.tx.push_back({f.id, order[i].relay, rate, f.remaining_bits});
      if (f.remaining_bits <= 0.0) {
        f.completed_frame = frame;
        out.completed.push_back(f.id);
      } else if (rate > 0.0) {
        keep.push_back(i);
        continue;
      }
      occ.set(transmission(i), false);
      refill = true;
    }
    out.slots.push_back(std::move(rec));
    if (keep.size() != active.size()) {
      active = std::move(keep);
      stale = true;
    }
  }
  return out;
}

}  // namespace t2t
