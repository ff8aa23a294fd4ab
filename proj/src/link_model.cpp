#include "t2t/link_model.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace t2t {

std::vector<NodeId> LinkModel::all_nodes() const {
  std::vector<NodeId> nodes;
  for (Train t : {Train::A, Train::B})
    for (int i = 0; i < mr_count(t); ++i) nodes.push_back(NodeId{t, i});
  return nodes;
}

// ---------------------------------------------------------------------------

PhysicalLinkModel::PhysicalLinkModel(Deployment deployment)
    : dep_(std::move(deployment)),
      pattern_(dep_.radio),
      noise_mw_(dep_.radio.noise_floor_mw()),
      si_mw_(self_interference(dep_.radio)) {}

double PhysicalLinkModel::signal_power(double dist) const {
  const double g = pattern_.boresight();
  const double n = dep_.radio.path_loss_exp;
  const double loss = n == 2.0 ? 1.0 / (dist * dist) : std::pow(dist, -n);
  return dep_.radio.k0 * dep_.radio.tx_power_mw * g * g * loss;
}

double PhysicalLinkModel::capacity(double signal_mw, double interference_mw) const {
  const RadioParams& r = dep_.radio;
  return r.efficiency * r.bandwidth_hz * std::log2(1.0 + signal_mw / (noise_mw_ + interference_mw));
}

bool PhysicalLinkModel::direct_blocked(NodeId src, NodeId dst, std::int64_t slot) const {
  return dep_.blocked(src, dst, slot);
}

double PhysicalLinkModel::planning_rate(NodeId src, NodeId dst, std::optional<NodeId> relay,
                                        std::int64_t slot) const {
  auto hop = [&](NodeId tx, NodeId rx, double extra) {
    if (dep_.blocked(tx, rx, slot)) return 0.0;
    const double d = (dep_.position(tx, slot) - dep_.position(rx, slot)).norm();
    return capacity(signal_power(d), extra);
  };
  if (!relay) return hop(src, dst, 0.0);
  if (*relay == src || *relay == dst) return 0.0;
  return std::min(hop(src, *relay, si_mw_), hop(*relay, dst, 0.0));
}

std::vector<NodeId> PhysicalLinkModel::relay_candidates(NodeId src, NodeId dst,
                                                        std::int64_t slot) const {
  std::vector<NodeId> out;
  const double h = dep_.trains.a.lateral_y;
  for (NodeId end : {src, dst}) {
    const Point pos = dep_.position(end, slot);
    const EndpointSide side =
        end.train == Train::A ? EndpointSide::TransmitterOnA : EndpointSide::ReceiverOnB;
    const BoundaryAbscissas b = boundary_abscissas(pos, side, dep_.field, h);
    for (int i = 0; i < b.count; ++i) {
      auto c = snap_right_to_mr(b.x[i], other(end.train), dep_.trains, slot, dep_.slot_duration);
      if (!c || *c == src || *c == dst) continue;
      if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
    }
  }
  return out;
}

bool PhysicalLinkModel::hops_clear(const Transmission& t, std::int64_t slot) const {
  if (!t.relay) return !dep_.blocked(t.src, t.dst, slot);
  return !dep_.blocked(t.src, *t.relay, slot) && !dep_.blocked(*t.relay, t.dst, slot);
}

void PhysicalLinkModel::realized_rates(std::span<const Transmission> active, std::int64_t slot,
                                       std::span<double> out) const {
  struct Hop {
    NodeId tx, rx;
    Point tx_pos, rx_pos, aim;  // aim: unit vector tx -> rx
    double dist;
    bool blocked;
    std::size_t owner;
  };
  std::vector<Hop> hops;
  hops.reserve(2 * active.size());
  auto add = [&](NodeId tx, NodeId rx, std::size_t owner) {
    Hop h{tx, rx, dep_.position(tx, slot), dep_.position(rx, slot), {}, 0.0, false, owner};
    const Point d = h.rx_pos - h.tx_pos;
    h.dist = d.norm();
    h.aim = d / h.dist;
    h.blocked = tx.train != rx.train && los_blocked(h.tx_pos, h.rx_pos, dep_.field);
    hops.push_back(h);
  };
  for (std::size_t i = 0; i < active.size(); ++i) {
    const Transmission& t = active[i];
    if (t.relay) {
      add(t.src, *t.relay, i);
      add(*t.relay, t.dst, i);
    } else {
      add(t.src, t.dst, i);
    }
  }

  std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
  const RadioParams& radio = dep_.radio;
  const double base = radio.k0 * radio.tx_power_mw;
  const bool square_law = radio.path_loss_exp == 2.0;

  for (const Hop& h : hops) {
    double rate = 0.0;
    if (!h.blocked) {
      double interference = 0.0;
      for (const Hop& g : hops) {
        if (g.tx == h.tx || g.tx == h.rx || g.rx == h.tx || g.rx == h.rx) {
          if (g.tx == h.rx && &g != &h) interference += si_mw_;
          continue;
        }
        if (g.tx.train != h.rx.train && los_blocked(g.tx_pos, h.rx_pos, dep_.field)) continue;
        const Point d = h.rx_pos - g.tx_pos;
        const double dist = d.norm();
        const double cos_t = g.aim.dot(d) / dist;
        const double cos_r = h.aim.dot(d) / dist;
        const double loss = square_law ? 1.0 / (dist * dist) : std::pow(dist, -radio.path_loss_exp);
        interference += base * pattern_.linear_gain_cos(cos_t) * pattern_.linear_gain_cos(cos_r) * loss;
      }
      rate = capacity(signal_power(h.dist), interference);
    }
    out[h.owner] = std::min(out[h.owner], rate);
  }
}

// ---------------------------------------------------------------------------

RateMatrixModel::RateMatrixModel(int mr_per_train, std::vector<Eigen::MatrixXd> per_frame_rates,
                                 int sched_slots, int tx_slots)
    : n_(mr_per_train), rates_(std::move(per_frame_rates)), sched_slots_(sched_slots),
      tx_slots_(tx_slots) {
  if (n_ < 1) throw std::domain_error("rate matrix needs at least one MR per train");
  if (rates_.empty()) throw std::domain_error("rate matrix model needs at least one frame");
  for (const auto& m : rates_)
    if (m.rows() != 2 * n_ || m.cols() != 2 * n_)
      throw std::domain_error("rate matrix must be 2N x 2N");
}

NodeId RateMatrixModel::node_at(int index) const {
  return index < n_ ? NodeId{Train::A, index} : NodeId{Train::B, index - n_};
}

const Eigen::MatrixXd& RateMatrixModel::frame_matrix(std::int64_t slot) const {
  const std::int64_t frame = slot / (sched_slots_ + tx_slots_);
  if (frame < 0 || frame >= static_cast<std::int64_t>(rates_.size()))
    throw std::out_of_range("slot lies outside the rate matrix frames");
  return rates_[static_cast<std::size_t>(frame)];
}

double RateMatrixModel::rate(NodeId from, NodeId to, std::int64_t slot) const {
  return frame_matrix(slot)(index_of(from), index_of(to));
}

bool RateMatrixModel::direct_blocked(NodeId src, NodeId dst, std::int64_t slot) const {
  return rate(src, dst, slot) <= 0.0;
}

double RateMatrixModel::planning_rate(NodeId src, NodeId dst, std::optional<NodeId> relay,
                                      std::int64_t slot) const {
  if (!relay) return rate(src, dst, slot);
  if (*relay == src || *relay == dst) return 0.0;
  return std::min(rate(src, *relay, slot), rate(*relay, dst, slot));
}

std::vector<NodeId> RateMatrixModel::relay_candidates(NodeId src, NodeId dst, std::int64_t) const {
  std::vector<NodeId> out;
  for (NodeId v : all_nodes())
    if (v != src && v != dst) out.push_back(v);
  return out;
}

void RateMatrixModel::realized_rates(std::span<const Transmission> active, std::int64_t slot,
                                     std::span<double> out) const {
  for (std::size_t i = 0; i < active.size(); ++i)
    out[i] = planning_rate(active[i].src, active[i].dst, active[i].relay, slot);
}

bool RateMatrixModel::hops_clear(const Transmission& t, std::int64_t slot) const {
  return planning_rate(t.src, t.dst, t.relay, slot) > 0.0;
}

}  // namespace t2t
