#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "t2t/channel.hpp"

using namespace t2t;

namespace {

Deployment still_deployment(double bd = 0.0) {
  Deployment d;
  d.trains = {TrainConfig{0.0, 0.0, 200.0, 16, 150.0}, TrainConfig{0.0, 0.0, 200.0, 16, 0.0}};
  d.field = ObstacleField{50.0, bd, 50.0, 100.0, 0.0};
  return d;
}

constexpr NodeId A(int i) { return {Train::A, i}; }
constexpr NodeId B(int i) { return {Train::B, i}; }

}  // namespace

TEST_CASE("radio constants") {
  const RadioParams r;
  CHECK(r.k0 == doctest::Approx(7.269536453930486e-07).epsilon(1e-12));
  CHECK(std::abs(r.k0 - 7.2696e-7) < 1e-11);
  CHECK(r.noise_floor_dbm() == doctest::Approx(-103.20818753952375).epsilon(1e-12));
  CHECK(max_gain_dbi(30.0) == doctest::Approx(15.909977437209967).epsilon(1e-12));
  CHECK(side_lobe_gain_dbi(30.0) == doctest::Approx(-11.977232243601312).epsilon(1e-12));
  CHECK(self_interference(r) == doctest::Approx(1e-10));
}

TEST_CASE("radio validation") {
  RadioParams r;
  CHECK_NOTHROW(r.validate());
  r.k0 *= 1.001;
  CHECK_THROWS_AS(r.validate(), std::domain_error);
  r = RadioParams{};
  r.efficiency = 0.0;
  CHECK_THROWS_AS(r.validate(), std::domain_error);
  r = RadioParams{};
  r.bandwidth_hz = -1.0;
  CHECK_THROWS_AS(r.validate(), std::domain_error);
}

TEST_CASE("antenna pattern") {
  const RadioParams r;
  CHECK(antenna_gain(0.0, r) == doctest::Approx(15.909977437209967));
  CHECK(antenna_gain(10.0, r) == doctest::Approx(14.57219965943219));
  CHECK(antenna_gain(19.5, r) == doctest::Approx(10.823077437209967));
  CHECK(antenna_gain(19.6, r) == doctest::Approx(10.770770326098855));
  CHECK(antenna_gain(39.0, r) == doctest::Approx(-4.4376225627900325));
  CHECK(antenna_gain(39.1, r) == doctest::Approx(-11.977232243601312));
  CHECK(antenna_gain(60.0, r) == doctest::Approx(-11.977232243601312));
  CHECK(antenna_gain(180.0, r) == doctest::Approx(-11.977232243601312));
  CHECK_THROWS_AS(antenna_gain(-1.0, r), std::domain_error);
  CHECK_THROWS_AS(antenna_gain(181.0, r), std::domain_error);

  const AntennaPattern p(r);
  CHECK(p.boresight() == doctest::Approx(db_to_linear(15.909977437209967)));
  CHECK(p.linear_gain_cos(std::cos(10.0 * std::numbers::pi / 180.0)) ==
        doctest::Approx(db_to_linear(14.57219965943219)));
  CHECK(p.linear_gain_cos(-1.0) == doctest::Approx(p.side_lobe()));
}

TEST_CASE("received power") {
  const RadioParams r;
  const Point tx(0, 150), rx(0, 0);
  CHECK(received_power(tx, rx, rx, tx, r) == doctest::Approx(4.912693708517468e-05).epsilon(1e-12));
  // Both antennas turned away: side lobe at each end.
  const double away = received_power(tx, rx, Point(0, 300), Point(0, -150), r);
  CHECK(away / received_power(tx, rx, rx, tx, r) == doctest::Approx(2.64580640726508e-06).epsilon(1e-9));
  CHECK_THROWS_AS(received_power(tx, tx, rx, rx, r), std::domain_error);
}

TEST_CASE("link rates") {
  const Deployment dep = still_deployment();
  CHECK(link_rate(A(0), B(0), {}, false, 0, dep) == doctest::Approx(23966271604.489).epsilon(1e-12));
  CHECK(link_rate(A(0), B(0), {}, true, 0, dep) == doctest::Approx(22011333330.7718).epsilon(1e-12));

  // A parallel link one MR over interferes through the main lobes.
  const std::vector<ActiveLink> others{{A(1), B(1)}};
  CHECK(cross_interference(B(0), A(0), others, 0, dep) == doctest::Approx(4.242283778048577e-05).epsilon(1e-9));
  CHECK(link_rate(A(0), B(0), others, false, 0, dep) == doctest::Approx(1331657203.780196).epsilon(1e-9));

  // Links sharing a node with the victim are not counted as interference.
  const std::vector<ActiveLink> sharing{{A(0), B(1)}, {A(1), B(0)}, {B(0), A(3)}};
  CHECK(cross_interference(B(0), A(0), sharing, 0, dep) == 0.0);
  CHECK(shannon_rate(1.0, 0.0, dep.radio) > shannon_rate(1.0, 1e-6, dep.radio));
}

TEST_CASE("blocked paths") {
  Deployment dep = still_deployment(50.0);  // the whole band is an obstacle
  CHECK(dep.blocked(A(0), B(0), 0));
  CHECK_FALSE(dep.blocked(A(0), A(1), 0));
  CHECK(link_rate(A(0), B(0), {}, false, 0, dep) == 0.0);
  // Blocked interferers contribute nothing.
  const std::vector<ActiveLink> others{{A(1), B(1)}};
  CHECK(cross_interference(B(0), A(0), others, 0, dep) == 0.0);
}

TEST_CASE("flow rates") {
  const Deployment dep = still_deployment();
  const double direct = flow_rate(A(0), B(0), std::nullopt, {}, 0, dep);
  CHECK(direct == doctest::Approx(23966271604.489).epsilon(1e-12));
  // Relay B1: the first hop carries the relay's self-interference.
  const double hop1 = link_rate(A(0), B(1), {}, true, 0, dep);
  const double hop2 = link_rate(B(1), B(0), {}, false, 0, dep);
  CHECK(flow_rate(A(0), B(0), B(1), {}, 0, dep) == doctest::Approx(std::min(hop1, hop2)));
  CHECK_THROWS_AS(flow_rate(A(0), B(0), B(0), {}, 0, dep), std::domain_error);
  CHECK_THROWS_AS(flow_rate(A(0), B(0), A(0), {}, 0, dep), std::domain_error);
}

TEST_CASE("active link sets") {
  const std::vector<ActiveLink> ok{{A(0), B(0)}, {B(0), A(0)}, {A(1), B(1)}};
  CHECK(valid_link_set(ok));
  const std::vector<ActiveLink> two_tx{{A(0), B(0)}, {A(0), B(1)}};
  CHECK_FALSE(valid_link_set(two_tx));
  const std::vector<ActiveLink> two_rx{{A(0), B(0)}, {A(1), B(0)}};
  CHECK_FALSE(valid_link_set(two_rx));
}
