#include "doctest.h"

#include "t2t/geometry.hpp"

using namespace t2t;

namespace {

TrainPair default_trains() {
  return {TrainConfig{0.0, 300.0 / 3.6, 200.0, 16, 150.0}, TrainConfig{0.0, 150.0 / 3.6, 200.0, 16, 0.0}};
}

ObstacleField field(double bd, double phase = 0.0) { return ObstacleField{50.0, bd, 50.0, 100.0, phase}; }

}  // namespace

TEST_CASE("node ids print and parse") {
  CHECK(to_string(NodeId{Train::A, 3}) == "A3");
  CHECK(to_string(NodeId{Train::B, 12}) == "B12");
  CHECK(parse_node("B12") == NodeId{Train::B, 12});
  CHECK_THROWS_AS(parse_node("C1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_node("A1x"), std::invalid_argument);
  CHECK(NodeId{Train::A, 15} < NodeId{Train::B, 0});
}

TEST_CASE("MRs sit at the centres of equal roof sections") {
  TrainConfig t{0.0, 0.0, 200.0, 16, 150.0};
  CHECK(t.mr_offset(0) == doctest::Approx(6.25));
  CHECK(t.mr_offset(15) == doctest::Approx(193.75));
  CHECK_THROWS_AS(t.mr_offset(16), std::domain_error);
}

TEST_CASE("node positions") {
  TrainPair trains = default_trains();
  trains.a.speed = 0.0;
  const Point p = node_position({Train::A, 0}, trains, 12345, 18e-6);
  CHECK(p.x() == doctest::Approx(-6.25));
  CHECK(p.y() == 150.0);

  trains.a.speed = 83.333;
  const double moved = node_position({Train::A, 0}, trains, 1000, 18e-6).x() -
                       node_position({Train::A, 0}, trains, 0, 18e-6).x();
  CHECK(moved == doctest::Approx(1.499994).epsilon(1e-9));
  CHECK_THROWS_AS(node_position({Train::A, 0}, trains, -1, 18e-6), std::domain_error);
  CHECK_THROWS_AS(node_position({Train::B, 16}, trains, 0, 18e-6), std::domain_error);
}

TEST_CASE("node distances") {
  const TrainPair trains = default_trains();
  CHECK(node_distance({Train::A, 0}, {Train::B, 0}, trains, 0, 18e-6) == doctest::Approx(150.0));
  CHECK(node_distance({Train::A, 4}, {Train::A, 5}, trains, 0, 18e-6) == doctest::Approx(12.5));
  CHECK(node_distance({Train::A, 4}, {Train::A, 5}, trains, 50000, 18e-6) == doctest::Approx(12.5));
  // 41.667 m/s relative for 1000 slots of 18 us.
  CHECK(node_distance({Train::A, 0}, {Train::B, 0}, trains, 1000, 18e-6) ==
        doctest::Approx(150.0018749882814).epsilon(1e-12));
}

TEST_CASE("line of sight against the obstacle band") {
  CHECK(los_blocked(Point(50, 150), Point(50, 0), field(20)));
  CHECK_FALSE(los_blocked(Point(75, 150), Point(75, 0), field(20)));
  // Right edges are open: x = 20 is already clear.
  CHECK_FALSE(los_blocked(Point(20, 150), Point(20, 0), field(20)));
  CHECK(los_blocked(Point(19.999, 150), Point(19.999, 0), field(20)));
  // A slanted segment clear at both band edges but crossing an obstacle inside.
  CHECK(los_blocked(Point(30, 150), Point(90, 0), field(20)));
  CHECK_FALSE(los_blocked(Point(0, 150), Point(500, 0), field(0)));
  CHECK(los_blocked(Point(25, 150), Point(25, 0), field(50)));
  // Segments that never enter the band.
  CHECK_FALSE(los_blocked(Point(0, 150), Point(300, 150), field(45)));
  CHECK_FALSE(los_blocked(Point(0, 110), Point(10, 140), field(45)));
  CHECK_THROWS_AS(los_blocked(Point(1, 1), Point(1, 1), field(20)), std::domain_error);
}

TEST_CASE("obstacle edges") {
  const ObstacleField f = field(20, 5);  // obstacles [5, 25), [55, 75), ...
  CHECK(f.right_edge_at_or_before(25.0) == 25.0);
  CHECK(f.right_edge_at_or_before(60.0) == 25.0);
  CHECK(f.right_edge_at_or_before(-1.0) == -25.0);
  CHECK(f.right_edge_after(25.0) == 75.0);
  CHECK(f.right_edge_after(24.9) == 25.0);
  CHECK(f.gap_len() == 30.0);
  CHECK_THROWS_AS(ObstacleField::from_blockage(1.5, 50, 50, 100, 0), std::domain_error);
  CHECK(ObstacleField::from_blockage(0.4, 50, 50, 100, 0).blocked_len == doctest::Approx(20.0));
}

TEST_CASE("relay region boundaries") {
  const ObstacleField f = field(20);
  const BoundaryAbscissas from_a = boundary_abscissas(Point(60, 150), EndpointSide::TransmitterOnA, f, 150);
  REQUIRE(from_a.count == 2);
  CHECK(from_a.x[0] == doctest::Approx(0.0));
  CHECK(from_a.x[1] == doctest::Approx(90.0));
  const BoundaryAbscissas from_b = boundary_abscissas(Point(60, 0), EndpointSide::ReceiverOnB, f, 150);
  REQUIRE(from_b.count == 2);
  CHECK(from_b.x[0] == doctest::Approx(0.0));
  CHECK(from_b.x[1] == doctest::Approx(90.0));
  CHECK(boundary_abscissas(Point(60, 150), EndpointSide::TransmitterOnA, field(0), 150).count == 0);
  CHECK(ray_abscissa(Point(0, 150), Point(10, 100), 0) == doctest::Approx(30.0));
  CHECK_THROWS_AS(ray_abscissa(Point(0, 150), Point(10, 150), 0), std::domain_error);
}

TEST_CASE("snapping onto the opposite track") {
  const TrainPair trains = default_trains();
  // B MRs at k = 0: -6.25, -18.75, ..., -193.75.
  CHECK(snap_right_to_mr(-20.0, Train::B, trains, 0, 18e-6) == NodeId{Train::B, 1});
  CHECK(snap_right_to_mr(-18.75, Train::B, trains, 0, 18e-6) == NodeId{Train::B, 1});
  CHECK(snap_right_to_mr(-500.0, Train::B, trains, 0, 18e-6) == NodeId{Train::B, 15});
  CHECK_FALSE(snap_right_to_mr(0.0, Train::B, trains, 0, 18e-6).has_value());
}

TEST_CASE("communication window") {
  const TrainPair trains = default_trains();
  const CommWindow w = comm_window(trains, 250.0, 18e-6, 48, 2000);
  CHECK(w.slot_count == 66667);
  CHECK(w.frame_count == 33);
  CHECK(w.frame_slots() == 2048);
  CHECK(w.first_tx_slot(2) == 2 * 2048 + 48);
  CHECK(comm_window(trains, 200.0, 18e-6, 48, 2000).slot_count == 0);
  CHECK(comm_window(trains, 200.0, 18e-6, 48, 2000).frame_count == 0);
  CHECK_THROWS_AS(comm_window(trains, 150.0, 18e-6, 48, 2000), std::domain_error);
  TrainPair same = trains;
  same.b.speed = same.a.speed;
  CHECK_THROWS_AS(comm_window(same, 250.0, 18e-6, 48, 2000), std::domain_error);

  // The faster train already ahead leaves less of the threshold to cover.
  TrainPair ahead = trains;
  ahead.a.initial_position = 10.0;
  CHECK(comm_window(ahead, 250.0, 18e-6, 48, 2000).slot_count == 53334);
  TrainPair behind = trains;
  behind.b.initial_position = 10.0;
  CHECK(comm_window(behind, 250.0, 18e-6, 48, 2000).slot_count == 80000);
  CHECK(frames_for(2048, 48, 2000) == 1);
  CHECK(frames_for(2049, 48, 2000) == 2);
}
