#include "t2t/simcore.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace t2t {

RunRecord run(const Scenario& scenario, PolicyId policy, bool keep_frames) {
  const Instance& inst = scenario.instance;
  ScheduleValidator validator(inst.flows, inst.window);
  auto rng = make_stream(scenario.config.seed, "random-policy");

  RunRecord rec;
  Metrics& m = rec.metrics;
  auto observe = [&](const FrameSchedule& fs) {
    const auto violations = validator.check(fs);
    if (!violations.empty())
      throw InvariantError(to_string(policy) + " schedule broke a constraint: " + to_string(violations.front()));
    m.per_frame.push_back({fs.frame, static_cast<int>(fs.completed.size()), fs.delivered_bits});
  };
  PolicyRun pr = run_policy(policy, inst, rng, observe);

  if (validator.completed() != pr.completed || validator.delivered_bits() != pr.delivered_bits)
    throw InvariantError("metrics disagree with the validator's recomputation");
  m.completed_flows = pr.completed;
  m.delivered_bits = pr.delivered_bits;
  m.frames = inst.window.frame_count;
  m.slots = inst.window.slot_count;
  const double duration = static_cast<double>(m.slots) * inst.window.slot_duration;
  m.throughput_bps = duration > 0.0 ? m.delivered_bits / duration : 0.0;
  if (keep_frames) rec.frames = std::move(pr.frames);
  return rec;
}

Metrics run_metrics(const Scenario& scenario, PolicyId policy) {
  return run(scenario, policy, false).metrics;
}

std::string to_string(Axis a) {
  switch (a) {
    case Axis::none: return "none";
    case Axis::dis: return "dis";
    case Axis::v_b: return "v_b";
    case Axis::v_a: return "v_a";
    case Axis::offset: return "offset";
    case Axis::blockage: return "blockage";
    case Axis::flows: return "flows";
  }
  return "?";
}

Axis parse_axis(const std::string& name) {
  for (Axis a : {Axis::dis, Axis::v_b, Axis::v_a, Axis::offset, Axis::blockage, Axis::flows})
    if (to_string(a) == name) return a;
  throw ConfigError("--axis: unknown axis '" + name + "' (dis, v_b, v_a, offset, blockage, flows)");
}

void apply_axis(ScenarioConfig& c, Axis axis, double value) {
  switch (axis) {
    case Axis::none: break;
    case Axis::dis: c.dis = value; break;
    case Axis::v_b: c.trains.b.speed = value / 3.6; break;
    case Axis::v_a: {
      const double delta = c.trains.a.speed - c.trains.b.speed;
      c.trains.a.speed = value / 3.6;
      c.trains.b.speed = c.trains.a.speed - delta;
      break;
    }
    case Axis::offset: c.trains.b.initial_position = c.trains.a.initial_position + value; break;
    case Axis::blockage: c.blockage = value; break;
    case Axis::flows:
      if (value != std::floor(value)) throw ConfigError("flows: axis values must be whole numbers");
      c.flow_count = static_cast<int>(value);
      break;
  }
}

int default_threads() {
  if (const char* env = std::getenv("T2T_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, Axis axis, const std::vector<double>& values,
                            const std::vector<std::uint64_t>& seeds, const std::vector<PolicyId>& policies,
                            int threads) {
  // Build every cell's config up front so bad values fail before any work.
  std::vector<ScenarioConfig> cells;
  for (double v : values)
    for (std::uint64_t seed : seeds) {
      ScenarioConfig c = base;
      apply_axis(c, axis, v);
      c.seed = seed;
      c.validate();
      cells.push_back(std::move(c));
    }

  const std::size_t np = policies.size();
  std::vector<SweepRow> rows(cells.size() * np);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Scenario s = build_scenario(cells[i]);
        for (std::size_t p = 0; p < np; ++p) {
          SweepRow& r = rows[i * np + p];
          r.axis = axis;
          r.value = values[i / seeds.size()];
          r.seed = cells[i].seed;
          r.policy = policies[p];
          r.metrics = run_metrics(s, policies[p]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };

  const int n = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    const Metrics& m = r.metrics;
    out << to_string(r.axis) << ',' << format_number(r.value) << ',' << r.seed << ',' << to_string(r.policy)
        << ',' << m.completed_flows << ',' << format_number(m.delivered_bits) << ','
        << format_number(m.throughput_bps) << ',' << m.frames << ',' << m.slots << '\n';
  }
}

std::vector<double> mean_completed(const std::vector<SweepRow>& rows, PolicyId policy) {
  std::vector<double> values, sums, counts;
  for (const SweepRow& r : rows) {
    if (r.policy != policy) continue;
    auto it = std::find(values.begin(), values.end(), r.value);
    std::size_t k = static_cast<std::size_t>(it - values.begin());
    if (it == values.end()) {
      values.push_back(r.value);
      sums.push_back(0.0);
      counts.push_back(0.0);
    }
    sums[k] += r.metrics.completed_flows;
    counts[k] += 1.0;
  }
  for (std::size_t k = 0; k < sums.size(); ++k) sums[k] /= counts[k];
  return sums;
}

bool monotone_within(const std::vector<double>& s, bool increasing, double tolerance) {
  int inversions = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double step = increasing ? s[i + 1] - s[i] : s[i] - s[i + 1];
    if (step >= 0.0) continue;
    const double scale = std::max(std::abs(s[i]), std::abs(s[i + 1]));
    if (++inversions > 1 || -step >= tolerance * scale) return false;
  }
  return true;
}

}  // namespace t2t
