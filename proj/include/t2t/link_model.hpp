#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "t2t/channel.hpp"
#include "t2t/geometry.hpp"

namespace t2t {

/// One flow transmitting in one slot, in direct mode or through `relay`.
struct Transmission {
  int flow = 0;
  NodeId src;
  NodeId dst;
  std::optional<NodeId> relay;
};

/// Source of link rates for the schedulers and the oracle. Slots are global
/// indices counted from the start of the communication window.
class LinkModel {
 public:
  virtual ~LinkModel() = default;

  virtual int mr_count(Train train) const = 0;

  /// Whether the direct link src -> dst is unusable at `slot`.
  virtual bool direct_blocked(NodeId src, NodeId dst, std::int64_t slot) const = 0;

  /// Interference-free rate [bit/s]. Relay mode includes the relay's own
  /// self-interference. Never below any realized rate of the same mode.
  virtual double planning_rate(NodeId src, NodeId dst, std::optional<NodeId> relay,
                               std::int64_t slot) const = 0;

  /// Candidate relays for a flow whose direct link is blocked.
  virtual std::vector<NodeId> relay_candidates(NodeId src, NodeId dst, std::int64_t slot) const = 0;

  /// Per-flow rates of a concurrent transmission set.
  virtual void realized_rates(std::span<const Transmission> active, std::int64_t slot,
                              std::span<double> out) const = 0;

  /// Whether every hop of `t` keeps line of sight at `slot`.
  virtual bool hops_clear(const Transmission& t, std::int64_t slot) const = 0;

  /// True when rates depend only on the frame and not on co-scheduled links.
  virtual bool frame_constant_interference_free() const { return false; }

  std::vector<NodeId> all_nodes() const;
};

/// Rates from the geometric channel: LOS blockage, directional gains,
/// full-duplex self-interference and co-channel interference.
class PhysicalLinkModel final : public LinkModel {
 public:
  explicit PhysicalLinkModel(Deployment deployment);

  const Deployment& deployment() const { return dep_; }

  int mr_count(Train train) const override { return dep_.trains[train].mr_count; }
  bool direct_blocked(NodeId src, NodeId dst, std::int64_t slot) const override;
  double planning_rate(NodeId src, NodeId dst, std::optional<NodeId> relay,
                       std::int64_t slot) const override;
  std::vector<NodeId> relay_candidates(NodeId src, NodeId dst, std::int64_t slot) const override;
  void realized_rates(std::span<const Transmission> active, std::int64_t slot,
                      std::span<double> out) const override;
  bool hops_clear(const Transmission& t, std::int64_t slot) const override;

 private:
  double signal_power(double dist) const;
  double capacity(double signal_mw, double interference_mw) const;

  Deployment dep_;
  AntennaPattern pattern_;
  double noise_mw_;
  double si_mw_;
};

/// Replays book-value rates: one square matrix of link rates per frame
/// (node order A0..A(N-1), B0..B(N-1)); a zero entry means blocked.
class RateMatrixModel final : public LinkModel {
 public:
  RateMatrixModel(int mr_per_train, std::vector<Eigen::MatrixXd> per_frame_rates,
                  int sched_slots, int tx_slots);

  int mr_count(Train) const override { return n_; }
  bool direct_blocked(NodeId src, NodeId dst, std::int64_t slot) const override;
  double planning_rate(NodeId src, NodeId dst, std::optional<NodeId> relay,
                       std::int64_t slot) const override;
  std::vector<NodeId> relay_candidates(NodeId src, NodeId dst, std::int64_t slot) const override;
  void realized_rates(std::span<const Transmission> active, std::int64_t slot,
                      std::span<double> out) const override;
  bool hops_clear(const Transmission& t, std::int64_t slot) const override;
  bool frame_constant_interference_free() const override { return true; }

  int index_of(NodeId node) const { return (node.train == Train::A ? 0 : n_) + node.index; }
  NodeId node_at(int index) const;
  const std::vector<Eigen::MatrixXd>& matrices() const { return rates_; }

 private:
  double rate(NodeId from, NodeId to, std::int64_t slot) const;
  const Eigen::MatrixXd& frame_matrix(std::int64_t slot) const;

  int n_;
  std::vector<Eigen::MatrixXd> rates_;
  int sched_slots_;
  int tx_slots_;
};

}  // namespace t2t
