#include "t2t/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace t2t {

std::string to_string(NodeId node) {
  return (node.train == Train::A ? "A" : "B") + std::to_string(node.index);
}

NodeId parse_node(const std::string& text) {
  if (text.size() < 2 || (text[0] != 'A' && text[0] != 'B'))
    throw std::invalid_argument("bad node id '" + text + "'");
  std::size_t used = 0;
  const int index = std::stoi(text.substr(1), &used);
  if (used != text.size() - 1 || index < 0) throw std::invalid_argument("bad node id '" + text + "'");
  return NodeId{text[0] == 'A' ? Train::A : Train::B, index};
}

void TrainConfig::validate() const {
  if (!(length > 0.0)) throw std::domain_error("train length must be positive");
  if (mr_count < 1) throw std::domain_error("train needs at least one MR");
  if (!(speed >= 0.0)) throw std::domain_error("train speed must be non-negative");
}

double TrainConfig::mr_offset(int index) const {
  if (index < 0 || index >= mr_count) throw std::domain_error("MR index out of range");
  return (index + 0.5) * (length / mr_count);
}

double TrainPair::separation() const { return std::abs(a.lateral_y - b.lateral_y); }

bool TrainPair::contains(NodeId node) const {
  return node.index >= 0 && node.index < (*this)[node.train].mr_count;
}

Point node_position(NodeId node, const TrainPair& trains, std::int64_t slot_index,
                    double slot_duration) {
  if (slot_index < 0) throw std::domain_error("negative slot index");
  const TrainConfig& t = trains[node.train];
  const double elapsed = static_cast<double>(slot_index) * slot_duration;
  return Point(t.initial_position - t.mr_offset(node.index) + t.speed * elapsed, t.lateral_y);
}

double node_distance(NodeId a, NodeId b, const TrainPair& trains, std::int64_t slot_index,
                     double slot_duration) {
  return (node_position(a, trains, slot_index, slot_duration) -
          node_position(b, trains, slot_index, slot_duration))
      .norm();
}

void ObstacleField::validate() const {
  if (!(period_len > 0.0)) throw std::domain_error("obstacle period must be positive");
  if (!(blocked_len >= 0.0 && blocked_len <= period_len))
    throw std::domain_error("obstacle length must lie in [0, period]");
  if (!(band_lo > 0.0 && band_lo < band_hi)) throw std::domain_error("obstacle band is empty");
}

ObstacleField ObstacleField::from_blockage(double probability, double period, double band_lo,
                                           double band_hi, double phase) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw std::domain_error("blockage probability must lie in [0, 1]");
  ObstacleField f{period, probability * period, band_lo, band_hi, phase};
  f.validate();
  return f;
}

double ObstacleField::right_edge_at_or_before(double x) const {
  // Right edges sit at phase + blocked + n * period.
  const double base = phase + blocked_len;
  const double n = std::floor((x - base) / period_len);
  double edge = base + n * period_len;
  if (edge > x) edge -= period_len;
  return edge;
}

double ObstacleField::right_edge_after(double x) const {
  double edge = right_edge_at_or_before(x) + period_len;
  if (edge <= x) edge += period_len;
  return edge;
}

double ray_abscissa(const Point& from, const Point& corner, double target_y) {
  const double dy = corner.y() - from.y();
  if (dy == 0.0) throw std::domain_error("boundary ray is parallel to the track");
  return from.x() + (corner.x() - from.x()) * (target_y - from.y()) / dy;
}

BoundaryAbscissas boundary_abscissas(const Point& endpoint, EndpointSide side,
                                     const ObstacleField& field, double h) {
  BoundaryAbscissas out;
  if (field.empty()) return out;

  // Left region is bounded by the nearest obstacle edge to the left of the
  // endpoint, right region by the first one to its right. Seen from train A
  // the limiting corner of the left obstacle is the bottom-right one (4) and
  // of the right obstacle the top-right one (2); from train B it is the
  // reverse.
  const double left_x = field.right_edge_at_or_before(endpoint.x());
  const double right_x = field.right_edge_after(endpoint.x());
  const bool from_a = side == EndpointSide::TransmitterOnA;
  const double target_y = from_a ? 0.0 : h;
  const double left_corner_y = from_a ? field.band_lo : field.band_hi;
  const double right_corner_y = from_a ? field.band_hi : field.band_lo;

  out.x[0] = ray_abscissa(endpoint, Point(left_x, left_corner_y), target_y);
  out.x[1] = ray_abscissa(endpoint, Point(right_x, right_corner_y), target_y);
  out.count = 2;
  return out;
}

std::optional<NodeId> snap_right_to_mr(double abscissa, Train target, const TrainPair& trains,
                                       std::int64_t slot_index, double slot_duration) {
  std::optional<NodeId> best;
  double best_x = 0.0;
  const TrainConfig& t = trains[target];
  for (int i = 0; i < t.mr_count; ++i) {
    const NodeId node{target, i};
    const double x = node_position(node, trains, slot_index, slot_duration).x();
    if (x >= abscissa && (!best || x < best_x)) {
      best = node;
      best_x = x;
    }
  }
  return best;
}

std::int64_t frames_for(std::int64_t slot_count, int sched_slots, int tx_slots) {
  const std::int64_t per_frame = sched_slots + tx_slots;
  if (per_frame <= 0) throw std::domain_error("frame has no slots");
  return (slot_count + per_frame - 1) / per_frame;
}

CommWindow comm_window(const TrainPair& trains, double dis, double slot_duration,
                       int sched_slots, int tx_slots) {
  if (!(slot_duration > 0.0)) throw std::domain_error("slot duration must be positive");
  if (sched_slots < 0 || tx_slots <= 0) throw std::domain_error("bad frame structure");
  const double train_len = std::max(trains.a.length, trains.b.length);
  if (dis < train_len) throw std::domain_error("threshold is shorter than the train");
  const double dv = trains.a.speed - trains.b.speed;
  if (dv == 0.0) throw std::domain_error("unbounded window: equal train speeds");

  // The faster train pulls ahead; its current lead counts against the window.
  const double lead = trains.a.initial_position - trains.b.initial_position;
  const double numerator = dis - train_len - (dv > 0.0 ? lead : -lead);

  CommWindow w;
  w.slot_duration = slot_duration;
  w.sched_slots = sched_slots;
  w.tx_slots = tx_slots;
  w.slot_count =
      numerator <= 0.0 ? 0 : static_cast<std::int64_t>(std::ceil(numerator / (std::abs(dv) * slot_duration)));
  w.frame_count = frames_for(w.slot_count, sched_slots, tx_slots);
  return w;
}

}  // namespace t2t
