#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace t2t {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point = Point2<double>;

enum class Train : std::uint8_t { A = 0, B = 1 };

constexpr Train other(Train t) noexcept { return t == Train::A ? Train::B : Train::A; }

/// A mobile relay on the roof of one of the two trains.
struct NodeId {
  Train train = Train::A;
  int index = 0;

  auto operator<=>(const NodeId&) const = default;
};

std::string to_string(NodeId node);
/// Parses the "A3" / "B12" form produced by to_string.
NodeId parse_node(const std::string& text);

struct TrainConfig {
  double initial_position = 0.0;  ///< x of the locomotive front [m]
  double speed = 0.0;             ///< [m/s], constant
  double length = 200.0;          ///< [m]
  int mr_count = 16;
  double lateral_y = 0.0;  ///< y of the track line [m]

  void validate() const;

  /// Distance of MR `index` behind the locomotive front: relays sit at the
  /// centres of mr_count equal roof sections.
  double mr_offset(int index) const;
};

struct TrainPair {
  TrainConfig a;
  TrainConfig b;

  const TrainConfig& operator[](Train t) const { return t == Train::A ? a : b; }
  double separation() const;
  bool contains(NodeId node) const;
};

Point node_position(NodeId node, const TrainPair& trains, std::int64_t slot_index,
                    double slot_duration);

double node_distance(NodeId a, NodeId b, const TrainPair& trains, std::int64_t slot_index,
                     double slot_duration);

/// Periodic band of rectangular obstacles between the two track lines.
/// Obstacle n covers [phase + n*period, phase + n*period + blocked) x [band_lo, band_hi].
struct ObstacleField {
  double period_len = 50.0;
  double blocked_len = 0.0;
  double band_lo = 50.0;
  double band_hi = 100.0;
  double phase = 0.0;

  double gap_len() const { return period_len - blocked_len; }
  bool empty() const { return blocked_len <= 0.0; }
  void validate() const;

  /// Maps a blockage probability onto the covered fraction of each period.
  static ObstacleField from_blockage(double probability, double period, double band_lo,
                                     double band_hi, double phase);

  /// Largest obstacle right edge <= x.
  double right_edge_at_or_before(double x) const;
  /// Smallest obstacle right edge > x.
  double right_edge_after(double x) const;
};

/// Exact test of the segment (a, b) against every obstacle rectangle. The
/// rectangles are closed in y and half-open in x: [left, right).
template <typename Scalar>
bool los_blocked(const Point2<Scalar>& a, const Point2<Scalar>& b, const ObstacleField& field) {
  if (a == b) throw std::domain_error("los_blocked: degenerate segment");
  if (field.empty()) return false;

  // Portion of the segment inside the band's y range.
  const Scalar lo = std::max<Scalar>(std::min(a.y(), b.y()), field.band_lo);
  const Scalar hi = std::min<Scalar>(std::max(a.y(), b.y()), field.band_hi);
  if (lo > hi) return false;

  Scalar xl, xr;
  if (a.y() == b.y()) {
    xl = std::min(a.x(), b.x());
    xr = std::max(a.x(), b.x());
  } else {
    const Scalar slope = (b.x() - a.x()) / (b.y() - a.y());
    const Scalar x_lo = a.x() + (lo - a.y()) * slope;
    const Scalar x_hi = a.x() + (hi - a.y()) * slope;
    xl = std::min(x_lo, x_hi);
    xr = std::max(x_lo, x_hi);
  }
  if (field.blocked_len >= field.period_len) return true;

  const Scalar period = field.period_len;
  Scalar u = std::fmod(xl - Scalar(field.phase), period);
  if (u < 0) u += period;
  if (u < Scalar(field.blocked_len)) return true;
  return xl + (period - u) <= xr;
}

enum class EndpointSide { TransmitterOnA, ReceiverOnB };

/// Left boundaries of the two effective relay regions seen from an endpoint,
/// intersected with the opposite track line. For TransmitterOnA the endpoint is
/// at y = h and the rays meet y = 0; for ReceiverOnB the endpoint is at y = 0
/// and the rays meet y = h. Empty when the field has no obstacles.
struct BoundaryAbscissas {
  std::array<double, 2> x{};
  int count = 0;
};

BoundaryAbscissas boundary_abscissas(const Point& endpoint, EndpointSide side,
                                     const ObstacleField& field, double h);

/// Abscissa where the line through `from` and `corner` crosses y = target_y.
double ray_abscissa(const Point& from, const Point& corner, double target_y);

/// MR of `target` with the smallest x >= abscissa at the given slot.
std::optional<NodeId> snap_right_to_mr(double abscissa, Train target, const TrainPair& trains,
                                       std::int64_t slot_index, double slot_duration);

struct CommWindow {
  std::int64_t slot_count = 0;  ///< M
  double slot_duration = 0.0;
  std::int64_t frame_count = 0;
  int sched_slots = 0;
  int tx_slots = 0;

  int frame_slots() const { return sched_slots + tx_slots; }
  std::int64_t frame_start(std::int64_t frame) const { return frame * frame_slots(); }
  std::int64_t first_tx_slot(std::int64_t frame) const { return frame_start(frame) + sched_slots; }
};

std::int64_t frames_for(std::int64_t slot_count, int sched_slots, int tx_slots);

/// Number of slots until the inter-train offset leaves the threshold `dis`.
CommWindow comm_window(const TrainPair& trains, double dis, double slot_duration,
                       int sched_slots, int tx_slots);

}  // namespace t2t
