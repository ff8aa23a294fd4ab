#include "doctest.h"

#include <algorithm>
#include <map>

#include "support.hpp"

using namespace t2t;
using testing::uniform;
using testing::uniform_int;

namespace {

ObstacleField random_field(std::mt19937_64& g) {
  const double period = uniform(g, 10.0, 80.0);
  return ObstacleField{period, uniform(g, 0.05, 0.95) * period, 50.0, 100.0, uniform(g, -100.0, 100.0)};
}

Point on_track(std::mt19937_64& g, double y) { return Point(uniform(g, -300.0, 300.0), y); }

// Dense sampling can only find obstacles the exact test also finds.
bool sampled_blocked(const Point& a, const Point& b, const ObstacleField& f) {
  for (int k = 0; k <= 4000; ++k) {
    const Point p = a + (b - a) * (k / 4000.0);
    if (p.y() < f.band_lo || p.y() > f.band_hi) continue;
    double u = std::fmod(p.x() - f.phase, f.period_len);
    if (u < 0) u += f.period_len;
    if (u < f.blocked_len) return true;
  }
  return false;
}

NodeId random_node(std::mt19937_64& g, const LinkModel& m, std::optional<Train> t = {}) {
  const Train tr = t ? *t : (uniform_int(g, 0, 1) ? Train::B : Train::A);
  return {tr, uniform_int(g, 0, m.mr_count(tr) - 1)};
}

// A random valid concurrent set: node-disjoint direct and relayed flows.
std::vector<Transmission> random_set(std::mt19937_64& g, const LinkModel& m, int tries) {
  std::vector<Transmission> set;
  std::map<NodeId, bool> used;
  for (int k = 0; k < tries; ++k) {
    const NodeId s = random_node(g, m);
    const NodeId d = random_node(g, m, other(s.train));
    std::optional<NodeId> r;
    if (uniform_int(g, 0, 1)) {
      r = random_node(g, m);
      if (*r == s || *r == d) continue;
    }
    if (used[s] || used[d] || (r && used[*r])) continue;
    used[s] = used[d] = true;
    if (r) used[*r] = true;
    set.push_back({static_cast<int>(set.size()), s, d, r});
  }
  return set;
}

}  // namespace

TEST_CASE("line of sight is symmetric and periodic") {
  std::mt19937_64 g(101);
  for (int k = 0; k < 5000; ++k) {
    const ObstacleField f = random_field(g);
    const Point a = on_track(g, 150.0), b = on_track(g, 0.0);
    const bool blocked = los_blocked(a, b, f);
    CHECK(blocked == los_blocked(b, a, f));
    const Point shift(f.period_len * uniform_int(g, -3, 3), 0.0);
    ObstacleField moved = f;
    moved.phase += shift.x();
    CHECK(blocked == los_blocked<double>(a + shift, b + shift, moved));
  }
}

TEST_CASE("line of sight agrees with dense sampling") {
  std::mt19937_64 g(103);
  int agree = 0, total = 0;
  for (int k = 0; k < 2000; ++k) {
    const ObstacleField f = random_field(g);
    const Point a = on_track(g, 150.0), b = on_track(g, 0.0);
    const bool exact = los_blocked(a, b, f);
    const bool sampled = sampled_blocked(a, b, f);
    if (sampled) CHECK(exact);
    agree += exact == sampled;
    ++total;
  }
  // Misses are limited to grazing crossings narrower than the sample step.
  CHECK(agree > 0.99 * total);
}

TEST_CASE("segments on one side of the band are never blocked") {
  std::mt19937_64 g(107);
  for (int k = 0; k < 1000; ++k) {
    const ObstacleField f = random_field(g);
    CHECK_FALSE(los_blocked(on_track(g, 150.0), on_track(g, 120.0), f));
    CHECK_FALSE(los_blocked(on_track(g, 0.0), on_track(g, 40.0), f));
  }
}

TEST_CASE("relay region boundaries sit on obstacle corners") {
  std::mt19937_64 g(109);
  for (int k = 0; k < 2000; ++k) {
    const ObstacleField f = random_field(g);
    const bool from_a = uniform_int(g, 0, 1) == 1;
    const Point e = on_track(g, from_a ? 150.0 : 0.0);
    const double target = from_a ? 0.0 : 150.0;
    const auto b = boundary_abscissas(e, from_a ? EndpointSide::TransmitterOnA : EndpointSide::ReceiverOnB, f, 150.0);
    REQUIRE(b.count == 2);
    const double edges[2] = {f.right_edge_at_or_before(e.x()), f.right_edge_after(e.x())};
    for (int i = 0; i < 2; ++i) {
      // Only the obstacle whose corner defines the boundary.
      const ObstacleField lone{1e7, f.blocked_len, f.band_lo, f.band_hi, edges[i] - f.blocked_len};
      const double eps = 1e-6;
      CHECK(los_blocked(e, Point(b.x[i] - eps, target), lone));
      CHECK_FALSE(los_blocked(e, Point(b.x[i] + eps, target), lone));
    }
  }
}

TEST_CASE("antenna gain never grows away from boresight") {
  const RadioParams r;
  double prev = antenna_gain(0.0, r);
  for (double t = 0.05; t <= 180.0; t += 0.05) {
    const double g = antenna_gain(t, r);
    CHECK(g <= prev + 1e-12);
    prev = g;
  }
}

TEST_CASE("realized rates never exceed planning rates") {
  std::mt19937_64 g(113);
  for (int k = 0; k < 200; ++k) {
    ScenarioConfig c = testing::short_window_config(g);
    const Scenario s = build_scenario(c);
    const LinkModel& m = *s.instance.model;
    const auto set = random_set(g, m, uniform_int(g, 1, 20));
    const std::int64_t slot = uniform_int(g, 0, 50000);
    std::vector<double> rates(set.size());
    m.realized_rates(set, slot, rates);
    for (std::size_t i = 0; i < set.size(); ++i) {
      CHECK(rates[i] >= 0.0);
      CHECK(rates[i] <= m.planning_rate(set[i].src, set[i].dst, set[i].relay, slot) * (1 + 1e-12));
      if (!m.hops_clear(set[i], slot)) CHECK(rates[i] == 0.0);
    }
  }
}

TEST_CASE("another transmission never raises anyone's rate") {
  std::mt19937_64 g(127);
  for (int k = 0; k < 200; ++k) {
    const Scenario s = build_scenario(testing::short_window_config(g));
    const LinkModel& m = *s.instance.model;
    auto set = random_set(g, m, uniform_int(g, 2, 24));
    if (set.size() < 2) continue;
    const std::int64_t slot = uniform_int(g, 0, 50000);
    std::vector<double> all(set.size()), fewer(set.size() - 1);
    m.realized_rates(set, slot, all);
    m.realized_rates(std::span(set).first(set.size() - 1), slot, fewer);
    for (std::size_t i = 0; i + 1 < set.size(); ++i) CHECK(all[i] <= fewer[i] * (1 + 1e-12));
  }
}

TEST_CASE("schedules respect the mode rules on tiny instances") {
  std::mt19937_64 g(131);
  for (int k = 0; k < 150; ++k) {
    const Scenario s = build_scenario(testing::tiny_config(g));
    const Instance& inst = s.instance;
    std::mt19937_64 rng(k);
    const PolicyRun r = run_policy(PolicyId::heuristic, inst, rng);
    CHECK(validate_schedule(r.frames, inst.flows, inst.window).empty());
    for (const FrameSchedule& fs : r.frames) {
      const std::int64_t first = inst.window.first_tx_slot(fs.frame);
      const std::int64_t last = first + inst.window.tx_slots - 1;
      bool relays_started = false;
      for (const PlannedFlow& p : fs.modes) {
        const Flow& f = inst.flows[p.flow];
        if (p.relay) {
          relays_started = true;
          CHECK(inst.model->direct_blocked(f.src, f.dst, first));
          CHECK(inst.model->direct_blocked(f.src, f.dst, last));
        } else {
          CHECK_FALSE(relays_started);
          CHECK_FALSE(inst.model->direct_blocked(f.src, f.dst, first));
        }
        CHECK(p.rate > 0.0);
      }
      // A flow transmits in one contiguous run per frame.
      std::map<int, std::pair<std::int64_t, std::int64_t>> span;
      std::map<int, int> count;
      for (const SlotRecord& rec : fs.slots)
        for (const TxRecord& t : rec.tx) {
          auto [it, fresh] = span.emplace(t.flow, std::pair{rec.slot, rec.slot});
          if (!fresh) it->second.second = rec.slot;
          ++count[t.flow];
        }
      for (const auto& [id, range] : span) CHECK(range.second - range.first + 1 == count[id]);
    }
  }
}

TEST_CASE("without obstacles the heuristic and direct-only agree") {
  std::mt19937_64 g(137);
  for (int k = 0; k < 60; ++k) {
    ScenarioConfig c = testing::tiny_config(g);
    c.blockage = 0.0;
    const Scenario s = build_scenario(c);
    std::mt19937_64 r1(1), r2(1);
    const PolicyRun h = run_policy(PolicyId::heuristic, s.instance, r1);
    const PolicyRun d = run_policy(PolicyId::direct, s.instance, r2);
    CHECK(h.completed == d.completed);
    CHECK(h.delivered_bits == d.delivered_bits);
  }
}

TEST_CASE("every policy is validator-clean on book-rate instances") {
  std::mt19937_64 g(139);
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(g, 2, 4);
    const int frames = uniform_int(g, 1, 4);
    const int tx = uniform_int(g, 1, 6);
    auto model = testing::random_matrix_model(g, n, frames, 1, tx);
    const Instance inst = testing::matrix_instance(model, frames, 1, tx, testing::random_flows(g, n, 2 * n * n, 12));
    for (PolicyId p : kAllPolicies) {
      std::mt19937_64 rng(k);
      const PolicyRun r = run_policy(p, inst, rng);
      CHECK(validate_schedule(r.frames, inst.flows, inst.window).empty());
    }
  }
}
