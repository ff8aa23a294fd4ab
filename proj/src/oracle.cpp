#include "t2t/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>

namespace t2t {

void check_oracle_gate(const Instance& inst, const OracleLimits& limits) {
  inst.validate();
  const LinkModel& m = *inst.model;
  const int n = std::max(m.mr_count(Train::A), m.mr_count(Train::B));
  const int max_flows = m.frame_constant_interference_free()
                            ? std::max(limits.max_flows, 2 * m.mr_count(Train::A) * m.mr_count(Train::B))
                            : limits.max_flows;
  auto refuse = [](const std::string& what) { throw OracleRefused("instance too large for the oracle: " + what); };
  if (static_cast<int>(inst.flows.size()) > max_flows)
    refuse(std::to_string(inst.flows.size()) + " flows (limit " + std::to_string(max_flows) + ")");
  if (inst.window.frame_count > limits.max_frames)
    refuse(std::to_string(inst.window.frame_count) + " frames (limit " + std::to_string(limits.max_frames) + ")");
  if (inst.window.tx_slots > limits.max_tx_slots)
    refuse(std::to_string(inst.window.tx_slots) + " transmission slots (limit " +
           std::to_string(limits.max_tx_slots) + ")");
  if (n > limits.max_mr_per_train)
    refuse(std::to_string(n) + " MRs per train (limit " + std::to_string(limits.max_mr_per_train) + ")");
}

namespace {

constexpr int kUnfixed = -2;
constexpr int kDirect = -1;
constexpr double kDoomed = std::numeric_limits<double>::infinity();

struct Option {
  int flow;
  int mode;  // kDirect or index into nodes
  double planning;
};

// One reachable situation after a slot. Flows that can no longer finish are
// marked kDoomed: they never transmit again and do not constrain dominance.
struct State {
  std::vector<double> rem;
  std::vector<int> mode;
  int completed = 0;
  SlotRecord slot;
  std::vector<PlannedFlow> fixes;
};

// Slot-by-slot search keeping, per mode assignment, only states whose
// remaining demands are not all at least another state's. A state with
// componentwise smaller remaining demand can replay any continuation of the
// other: flows that finish early simply stop, and a transmission leaving the
// set never lowers another flow's rate.
class Search {
 public:
  explicit Search(const Instance& inst)
      : inst_(inst), model_(*inst.model), nodes_(model_.all_nodes()),
        interference_free_(model_.frame_constant_interference_free()), nf_(inst.flows.size()) {
    const double dt = inst.slot_duration();
    for (std::int64_t t = 0; t < inst.window.frame_count; ++t)
      for (int k = 0; k < inst.window.tx_slots; ++k) {
        slots_.push_back(inst.window.first_tx_slot(t) + k);
        frame_of_.push_back(t);
      }
    const std::size_t ns = slots_.size();
    options_.resize(ns);
    suffix_.assign(ns + 1, std::vector<double>(nf_, 0.0));
    peak_.assign(ns + 1, std::vector<double>(nf_, 0.0));
    for (std::size_t i = ns; i-- > 0;) {
      for (const Flow& f : inst.flows) {
        if (!f.pending()) continue;
        std::vector<Option> opts;
        auto consider = [&](int mode) {
          const double r = model_.planning_rate(f.src, f.dst, relay_of(mode), slots_[i]);
          if (r > 0.0) opts.push_back({f.id, mode, r});
        };
        consider(kDirect);
        for (int v = 0; v < static_cast<int>(nodes_.size()); ++v)
          if (nodes_[v] != f.src && nodes_[v] != f.dst) consider(v);
        std::stable_sort(opts.begin(), opts.end(),
                         [](const Option& a, const Option& b) { return a.planning > b.planning; });
        const double cap = opts.empty() ? 0.0 : opts.front().planning * dt;
        suffix_[i][f.id] = suffix_[i + 1][f.id] + cap;
        peak_[i][f.id] = std::max(peak_[i + 1][f.id], cap);
        options_[i].insert(options_[i].end(), opts.begin(), opts.end());
      }
    }

    // Per slot, the most normalized progress any concurrent set can make:
    // the sum over its flows of realized / planning rate.
    kappa_suffix_.assign(ns + 1, 0.0);
    for (std::size_t i = ns; i-- > 0;) {
      State all;
      all.rem.assign(nf_, 1.0);
      all.mode.assign(nf_, kUnfixed);
      double best = 0.0;
      for_each_set(i, all, false, [&](const std::vector<Option>& set, const std::vector<double>& rates) {
        double sum = 0.0;
        for (std::size_t k = 0; k < set.size(); ++k) sum += std::max(rates[k], 0.0) / set[k].planning;
        best = std::max(best, sum);
      });
      kappa_suffix_[i] = kappa_suffix_[i + 1] + best;
    }
  }

  OracleResult run() {
    State root;
    root.rem.resize(nf_);
    root.mode.assign(nf_, kUnfixed);
    for (const Flow& f : inst_.flows) root.rem[f.id] = f.pending() ? f.remaining_bits : 0.0;
    mark_doomed(root, 0);
    target_ = static_cast<int>(
        std::count_if(inst_.flows.begin(), inst_.flows.end(), [](const Flow& f) { return f.pending(); }));
    seen_.assign(slots_.size() + 1, {});
    result_ = OracleResult{};
    result_.witness = witness();
    visit(root, 0);
    return result_;
  }

 private:
  // Depth first, most progress first. A state is skipped when an earlier one
  // at the same slot with the same live modes had no more remaining demand on
  // any flow: that one can replay every continuation of this one, since
  // finished flows simply stop and a transmission leaving the set never
  // lowers another flow's rate.
  void visit(State& cur, std::size_t i) {
    if (cur.completed > result_.best) {
      result_.best = cur.completed;
      result_.witness = witness();
    }
    if (i == slots_.size() || result_.best == target_) return;
    if (i > 0 && frame_of_[i] != frame_of_[i - 1]) std::fill(cur.mode.begin(), cur.mode.end(), kUnfixed);
    if (cur.completed + optimistic_additions(cur, i) <= result_.best) return;
    if (!remember(cur, i)) return;
    ++result_.nodes;

    const double dt = inst_.slot_duration();
    auto successor = [&] {
      State s;
      s.rem = cur.rem;
      s.mode = cur.mode;
      s.completed = cur.completed;
      s.slot = SlotRecord{slots_[i], {}};
      return s;
    };
    std::vector<std::pair<double, State>> children;
    for_each_set(i, cur, true, [&](const std::vector<Option>& set, const std::vector<double>& rates) {
      // A zero-rate member is no better than leaving it out.
      if (std::any_of(rates.begin(), rates.end(), [](double r) { return !(r > 0.0); })) return;
      State child = successor();
      double progress = 0.0;
      for (std::size_t k = 0; k < set.size(); ++k) {
        const Option& o = set[k];
        if (child.mode[o.flow] == kUnfixed) {
          child.mode[o.flow] = o.mode;
          child.fixes.push_back({o.flow, relay_of(o.mode), o.planning});
        }
        double& r = child.rem[o.flow];
        const double sent = std::min(rates[k] * dt, r);
        progress += sent / r;
        r -= sent;
        if (r <= 0.0) ++child.completed;
        child.slot.tx.push_back({o.flow, relay_of(o.mode), rates[k], r});
      }
      mark_doomed(child, i + 1);
      children.emplace_back(progress, std::move(child));
    });
    std::stable_sort(children.begin(), children.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    children.emplace_back(0.0, successor());
    mark_doomed(children.back().second, i + 1);
    for (auto& entry : children) {
      path_.push_back(&entry.second);
      visit(entry.second, i + 1);
      path_.pop_back();
      if (result_.best == target_) return;
    }
  }

  // Records the state unless an earlier one at slot i dominates it.
  bool remember(const State& s, std::size_t i) {
    std::string key;
    std::vector<double> rem(nf_);
    for (std::size_t f = 0; f < nf_; ++f) {
      const int m = live(s, static_cast<int>(f)) ? s.mode[f] : kUnfixed;
      key.append(reinterpret_cast<const char*>(&m), sizeof m);
      rem[f] = s.rem[f] == kDoomed ? kDoomed : std::max(s.rem[f], 0.0);
    }
    auto& group = seen_[i][key];
    for (const auto& r : group) {
      bool covers = true;
      for (std::size_t f = 0; f < nf_ && covers; ++f)
        if (rem[f] != kDoomed && r[f] > rem[f]) covers = false;
      if (covers) return false;
    }
    group.push_back(std::move(rem));
    return true;
  }

  std::optional<NodeId> relay_of(int mode) const {
    return mode == kDirect ? std::nullopt : std::optional<NodeId>(nodes_[mode]);
  }

  Transmission transmission(int flow, int mode) const {
    const Flow& f = inst_.flows[flow];
    return {flow, f.src, f.dst, relay_of(mode)};
  }

  int index(NodeId n) const { return (n.train == Train::A ? 0 : model_.mr_count(Train::A)) + n.index; }

  bool live(const State& s, int f) const { return s.rem[f] > 0.0 && s.rem[f] != kDoomed; }

  void mark_doomed(State& s, std::size_t i) const {
    for (std::size_t f = 0; f < nf_; ++f)
      if (live(s, static_cast<int>(f)) && suffix_[i][f] < s.rem[f] * (1.0 - 1e-12)) s.rem[f] = kDoomed;
  }

  // Live flows, then the largest subset whose minimum slot needs fit the
  // remaining slots at every source and destination and whose fractional
  // needs fit the interference-aware capacity.
  int optimistic_additions(const State& s, std::size_t i) const {
    std::vector<int> cand;
    std::vector<double> need, frac;
    for (const Flow& f : inst_.flows)
      if (live(s, f.id)) {
        cand.push_back(f.id);
        need.push_back(std::ceil(s.rem[f.id] / peak_[i][f.id] * (1.0 - 1e-12)));
        frac.push_back(s.rem[f.id] / peak_[i][f.id]);
      }
    std::sort(frac.begin(), frac.end());
    int by_capacity = 0;
    double used = 0.0;
    for (double x : frac) {
      used += x * (1.0 - 1e-9);
      if (used > kappa_suffix_[i] * (1.0 + 1e-9)) break;
      ++by_capacity;
    }

    const double slots_left = static_cast<double>(slots_.size() - i);
    auto fits = [&](std::uint32_t mask) {
      std::vector<std::pair<NodeId, double>> tx, rx;
      auto add = [](std::vector<std::pair<NodeId, double>>& v, NodeId n, double x) {
        for (auto& e : v)
          if (e.first == n) return e.second += x;
        v.emplace_back(n, x);
        return x;
      };
      for (std::size_t c = 0; c < cand.size(); ++c) {
        if (!(mask >> c & 1u)) continue;
        const Flow& f = inst_.flows[cand[c]];
        if (add(tx, f.src, need[c]) > slots_left || add(rx, f.dst, need[c]) > slots_left) return false;
      }
      return true;
    };
    const std::uint32_t full = cand.size() >= 32 ? ~0u : (1u << cand.size()) - 1u;
    if (cand.size() >= 32 || fits(full)) return std::min(static_cast<int>(cand.size()), by_capacity);
    int best = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int n = std::popcount(mask);
      if (n > best && fits(mask)) best = n;
    }
    return std::min(best, by_capacity);
  }

  // With frame-constant interference-free rates, leaving an idle fixed-mode
  // flow out of a slot it could use never helps.
  bool maximal(std::size_t i, const State& s, const std::vector<Option>& set) const {
    std::vector<char> tx_busy(nodes_.size(), 0), rx_busy(nodes_.size(), 0), in(nf_, 0);
    for (const Option& o : set) {
      const Flow& f = inst_.flows[o.flow];
      tx_busy[index(f.src)] = rx_busy[index(f.dst)] = 1;
      if (o.mode != kDirect) tx_busy[index(nodes_[o.mode])] = rx_busy[index(nodes_[o.mode])] = 1;
      in[o.flow] = 1;
    }
    for (const Option& o : options_[i]) {
      if (in[o.flow] || !live(s, o.flow) || s.mode[o.flow] != o.mode) continue;
      const Flow& f = inst_.flows[o.flow];
      if (tx_busy[index(f.src)] || rx_busy[index(f.dst)]) continue;
      if (o.mode != kDirect && (tx_busy[index(nodes_[o.mode])] || rx_busy[index(nodes_[o.mode])])) continue;
      return false;
    }
    return true;
  }

  // Calls `visit(set, realized_rates)` for every non-empty node-disjoint set
  // of options at slot i. With `restrict`, only live flows in their fixed mode.
  template <typename Visit>
  void for_each_set(std::size_t i, const State& s, bool restrict, Visit&& visit) const {
    std::vector<Option> chosen;
    std::vector<char> tx_busy(nodes_.size(), 0), rx_busy(nodes_.size(), 0), flow_busy(nf_, 0);
    std::vector<Transmission> tx;
    std::vector<double> rates;
    const auto& opts = options_[i];
    auto rec = [&](auto&& self, std::size_t from) -> void {
      if (!chosen.empty() && (!restrict || !interference_free_ || maximal(i, s, chosen))) {
        tx.clear();
        for (const Option& o : chosen) tx.push_back(transmission(o.flow, o.mode));
        rates.assign(tx.size(), 0.0);
        model_.realized_rates(tx, slots_[i], rates);
        visit(chosen, rates);
      }
      for (std::size_t o = from; o < opts.size(); ++o) {
        const Option& op = opts[o];
        if (flow_busy[op.flow]) continue;
        if (restrict && (!live(s, op.flow) || (s.mode[op.flow] != kUnfixed && s.mode[op.flow] != op.mode)))
          continue;
        const Flow& f = inst_.flows[op.flow];
        const int src = index(f.src), dst = index(f.dst);
        if (tx_busy[src] || rx_busy[dst]) continue;
        int r = -1;
        if (op.mode != kDirect) {
          r = index(nodes_[op.mode]);
          if (tx_busy[r] || rx_busy[r]) continue;
        }
        tx_busy[src] = rx_busy[dst] = 1;
        if (r >= 0) tx_busy[r] = rx_busy[r] = 1;
        flow_busy[op.flow] = 1;
        chosen.push_back(op);
        // Options of one flow are contiguous, so skip the rest of this flow's.
        std::size_t next = o + 1;
        while (next < opts.size() && opts[next].flow == op.flow) ++next;
        self(self, next);
        chosen.pop_back();
        flow_busy[op.flow] = 0;
        tx_busy[src] = rx_busy[dst] = 0;
        if (r >= 0) tx_busy[r] = rx_busy[r] = 0;
      }
    };
    rec(rec, 0);
  }

  std::vector<FrameSchedule> witness() const {
    std::vector<FrameSchedule> frames(static_cast<std::size_t>(inst_.window.frame_count));
    for (std::size_t t = 0; t < frames.size(); ++t) frames[t].frame = static_cast<std::int64_t>(t);
    std::vector<double> rem(nf_);
    for (const Flow& f : inst_.flows) rem[f.id] = f.remaining_bits;
    for (std::size_t l = 0; l < path_.size(); ++l) {
      const State& s = *path_[l];
      FrameSchedule& fs = frames[frame_of_[l]];
      fs.modes.insert(fs.modes.end(), s.fixes.begin(), s.fixes.end());
      if (s.slot.tx.empty()) continue;
      fs.slots.push_back(s.slot);
      for (const TxRecord& r : s.slot.tx) {
        fs.delivered_bits += rem[r.flow] - r.remaining;
        rem[r.flow] = r.remaining;
        if (r.remaining <= 0.0) fs.completed.push_back(r.flow);
      }
    }
    return frames;
  }

  const Instance& inst_;
  const LinkModel& model_;
  std::vector<NodeId> nodes_;
  bool interference_free_;
  std::size_t nf_;
  std::vector<std::int64_t> slots_;
  std::vector<std::int64_t> frame_of_;
  std::vector<std::vector<Option>> options_;
  std::vector<std::vector<double>> suffix_;
  std::vector<std::vector<double>> peak_;
  std::vector<double> kappa_suffix_;
  int target_ = 0;
  OracleResult result_;
  std::vector<const State*> path_;
  std::vector<std::unordered_map<std::string, std::vector<std::vector<double>>>> seen_;
};

}  // namespace

OracleResult exhaustive_optimum(const Instance& inst, const OracleLimits& limits) {
  check_oracle_gate(inst, limits);
  return Search(inst).run();
}

}  // namespace t2t
