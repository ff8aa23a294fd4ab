#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "t2t/geometry.hpp"

namespace t2t {

// Unit conversions.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

inline constexpr double kSpeedOfLight = 3.0e8;

struct RadioParams {
  double tx_power_mw = 1000.0;
  double carrier_hz = 28.0e9;
  double bandwidth_hz = 1200.0e6;
  double noise_dbm_per_mhz = -134.0;
  double path_loss_exp = 2.0;
  double hpbw_deg = 30.0;
  double si_cancellation = 1.0e-13;
  double efficiency = 1.0;
  double k0 = free_space_k0(28.0e9);

  /// (lambda / 4 pi)^2
  static double free_space_k0(double carrier_hz);
  void validate() const;

  /// N0 integrated over the bandwidth.
  double noise_floor_mw() const;
  double noise_floor_dbm() const;
};

/// Gaussian main lobe with a constant side lobe. theta in degrees.
double antenna_gain(double theta_deg, const RadioParams& radio);
double max_gain_dbi(double hpbw_deg);
double side_lobe_gain_dbi(double hpbw_deg);

/// Precomputed antenna pattern in linear scale.
class AntennaPattern {
 public:
  explicit AntennaPattern(const RadioParams& radio);

  /// Linear gain for an offset whose cosine is `cos_theta`.
  double linear_gain_cos(double cos_theta) const;
  double boresight() const { return g0_lin_; }
  double side_lobe() const { return gsl_lin_; }

 private:
  double hpbw_deg_;
  double g0_dbi_;
  double g0_lin_;
  double gsl_lin_;
  double cos_main_lobe_edge_;
};

/// Everything the physical link model needs to place nodes and evaluate rates.
struct Deployment {
  TrainPair trains;
  ObstacleField field;
  RadioParams radio;
  double slot_duration = 18e-6;

  Point position(NodeId node, std::int64_t slot) const {
    return node_position(node, trains, slot, slot_duration);
  }
  /// Intra-train links never cross the obstacle band.
  bool blocked(NodeId a, NodeId b, std::int64_t slot) const;
};

struct ActiveLink {
  NodeId tx;
  NodeId rx;
};

/// Links transmitting in one slot. Each transmitter aims at its receiver and
/// each receiver at its transmitter.
using ActiveLinkSet = std::span<const ActiveLink>;

bool valid_link_set(ActiveLinkSet links);

/// Received power [mW] at `rx_pos` from `tx_pos`, with the transmitter aimed
/// at `tx_aim` and the receiver at `rx_aim`.
double received_power(const Point& tx_pos, const Point& rx_pos, const Point& tx_aim,
                      const Point& rx_aim, const RadioParams& radio);

double received_power(NodeId tx, NodeId rx, NodeId tx_boresight_target,
                      NodeId rx_boresight_target, std::int64_t slot, const Deployment& dep);

double self_interference(const RadioParams& radio);

/// Interference [mW] at victim_rx (aimed at victim_tx) from every link in
/// `others` that shares no node with the victim link. Blocked interferer
/// paths contribute nothing.
double cross_interference(NodeId victim_rx, NodeId victim_tx, ActiveLinkSet others,
                          std::int64_t slot, const Deployment& dep);

/// Rate [bit/s]; zero when the link has no line of sight.
double link_rate(NodeId tx, NodeId rx, ActiveLinkSet others, bool rx_is_also_transmitting,
                 std::int64_t slot, const Deployment& dep);

/// Direct mode is the plain link rate; relay mode is decode-and-forward through
/// a full-duplex relay in the same slot and runs at the slower hop.
double flow_rate(NodeId src, NodeId dst, std::optional<NodeId> relay, ActiveLinkSet others,
                 std::int64_t slot, const Deployment& dep);

/// Shannon rate for a given received power and total interference [mW].
double shannon_rate(double signal_mw, double interference_mw, const RadioParams& radio);

}  // namespace t2t
