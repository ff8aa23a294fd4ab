#include "t2t/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace t2t {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Eigen::MatrixXd parse_matrix(const std::string& field, const std::string& text, int dim) {
  Eigen::MatrixXd m(dim, dim);
  std::stringstream rows(text);
  std::string row;
  int r = 0;
  while (std::getline(rows, row, ';')) {
    if (r >= dim) throw ConfigError(field + ": more than " + std::to_string(dim) + " rows");
    std::stringstream cells(row);
    std::string cell;
    int c = 0;
    while (cells >> cell) {
      if (c >= dim) throw ConfigError(field + ": row " + std::to_string(r + 1) + " has too many entries");
      m(r, c++) = parse_number(field, cell);
    }
    if (c != dim) throw ConfigError(field + ": row " + std::to_string(r + 1) + " needs " + std::to_string(dim) + " entries");
    ++r;
  }
  if (r != dim) throw ConfigError(field + ": needs " + std::to_string(dim) + " rows");
  return m;
}

int checked_int(const std::string& field, long long v) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(field + ": value out of range");
  return static_cast<int>(v);
}

void read_train(const KeyValueDoc& doc, const std::string& sec, TrainConfig& t) {
  t.initial_position = doc.number(sec + ".position", t.initial_position);
  t.speed = doc.number(sec + ".speed_kmh", t.speed * 3.6) / 3.6;
  t.length = doc.number(sec + ".length", t.length);
  t.mr_count = checked_int(sec + ".mr_count", doc.integer(sec + ".mr_count", t.mr_count));
  t.lateral_y = doc.number(sec + ".lateral_y", t.lateral_y);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t root, std::string_view stream) {
  return splitmix64(splitmix64(root) ^ fnv1a(stream));
}

std::mt19937_64 make_stream(std::uint64_t root, std::string_view stream) {
  return std::mt19937_64(stream_seed(root, stream));
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(slot_duration > 0.0, "frame.slot_duration must be positive");
  require(sched_slots >= 0, "frame.sched_slots must be non-negative");
  require(tx_slots >= 1, "frame.tx_slots must be at least 1");
  require(rate_refresh_slots >= 1, "frame.rate_refresh_slots must be at least 1");

  if (matrix) {
    const int n = matrix->nodes_per_train;
    require(n >= 1, "rate_matrix.nodes_per_train must be at least 1");
    require(!matrix->rates.empty(), "rate_matrix.frames must be at least 1");
    require(matrix->demand.rows() == 2 * n && matrix->demand.cols() == 2 * n,
            "rate_matrix.demand must be 2N x 2N");
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        const double q = matrix->demand(i, j);
        require(q >= 0.0, "rate_matrix.demand: negative entry");
        require(q == 0.0 || (i < n) != (j < n), "rate_matrix.demand: flows must cross between trains");
      }
    for (std::size_t t = 0; t < matrix->rates.size(); ++t)
      require((matrix->rates[t].array() >= 0.0).all(),
              "rate_matrix.rates_" + std::to_string(t + 1) + ": negative rate");
    return;
  }

  for (auto [name, t] : {std::pair{"train_a", &trains.a}, std::pair{"train_b", &trains.b}}) {
    const std::string sec = name;
    require(t->length > 0.0, sec + ".length must be positive");
    require(t->mr_count >= 1, sec + ".mr_count must be at least 1");
    require(t->speed >= 0.0, sec + ".speed_kmh must be non-negative");
  }
  require(trains.a.speed != trains.b.speed, "train_b.speed_kmh must differ from train_a.speed_kmh");
  require(trains.a.lateral_y > trains.b.lateral_y, "train_a.lateral_y must exceed train_b.lateral_y");
  require(band_lo > trains.b.lateral_y && band_hi < trains.a.lateral_y && band_lo < band_hi,
          "obstacles.band_lo/band_hi must lie strictly between the tracks");
  require(blockage >= 0.0 && blockage <= 1.0, "obstacles.blockage must lie in [0, 1]");
  require(period_len > 0.0, "obstacles.period must be positive");
  require(!phase || std::isfinite(*phase), "obstacles.phase must be finite");
  require(dis > 0.0, "frame.dis must be positive");

  const double train_len = std::max(trains.a.length, trains.b.length);
  const double lead = trains.a.initial_position - trains.b.initial_position;
  require(dis < train_len || std::abs(lead) <= dis - train_len,
          "train_b.position: initial offset already exceeds the threshold");

  const long long pairs = 2LL * trains.a.mr_count * trains.b.mr_count;
  require(flow_count >= 0, "traffic.flows must be non-negative");
  require(flow_count <= pairs, "traffic.flows: " + std::to_string(flow_count) + " exceeds the " +
                                   std::to_string(pairs) + " cross-train MR pairs");
  require(demand_min_bits > 0.0 && demand_max_bits >= demand_min_bits,
          "traffic.demand_min_mbit/demand_max_mbit must be positive and ordered");
  require(radio.tx_power_mw > 0.0, "radio.tx_power_mw must be positive");
  require(radio.carrier_hz > 0.0, "radio.carrier_ghz must be positive");
  require(radio.bandwidth_hz > 0.0, "radio.bandwidth_mhz must be positive");
  require(radio.path_loss_exp > 0.0, "radio.path_loss_exp must be positive");
  require(radio.hpbw_deg > 0.0 && radio.hpbw_deg < 180.0, "radio.hpbw_deg must lie in (0, 180)");
  require(radio.si_cancellation >= 0.0, "radio.si_cancellation must be non-negative");
  require(radio.efficiency > 0.0 && radio.efficiency <= 1.0, "radio.efficiency must lie in (0, 1]");
  try {
    radio.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("radio: ") + e.what());
  }
}

ScenarioConfig scenario_from_doc(const KeyValueDoc& doc) {
  ScenarioConfig c;
  read_train(doc, "train_a", c.trains.a);
  read_train(doc, "train_b", c.trains.b);

  RadioParams& r = c.radio;
  r.tx_power_mw = doc.number("radio.tx_power_mw", r.tx_power_mw);
  r.carrier_hz = doc.number("radio.carrier_ghz", r.carrier_hz / 1e9) * 1e9;
  r.bandwidth_hz = doc.number("radio.bandwidth_mhz", r.bandwidth_hz / 1e6) * 1e6;
  r.noise_dbm_per_mhz = doc.number("radio.noise_dbm_per_mhz", r.noise_dbm_per_mhz);
  r.path_loss_exp = doc.number("radio.path_loss_exp", r.path_loss_exp);
  r.hpbw_deg = doc.number("radio.hpbw_deg", r.hpbw_deg);
  r.si_cancellation = doc.number("radio.si_cancellation", r.si_cancellation);
  r.efficiency = doc.number("radio.efficiency", r.efficiency);
  if (!(r.carrier_hz > 0.0)) throw ConfigError("radio.carrier_ghz must be positive");
  r.k0 = RadioParams::free_space_k0(r.carrier_hz);

  c.blockage = doc.number("obstacles.blockage", c.blockage);
  c.period_len = doc.number("obstacles.period", c.period_len);
  c.band_lo = doc.number("obstacles.band_lo", c.band_lo);
  c.band_hi = doc.number("obstacles.band_hi", c.band_hi);
  const std::string phase = doc.text("obstacles.phase", "auto");
  if (phase != "auto") c.phase = parse_number("obstacles.phase", phase);

  c.flow_count = checked_int("traffic.flows", doc.integer("traffic.flows", c.flow_count));
  c.demand_min_bits = doc.number("traffic.demand_min_mbit", c.demand_min_bits / 1e6) * 1e6;
  c.demand_max_bits = doc.number("traffic.demand_max_mbit", c.demand_max_bits / 1e6) * 1e6;

  c.slot_duration = doc.number("frame.slot_duration", c.slot_duration);
  if (!(c.slot_duration > 0.0)) throw ConfigError("frame.slot_duration must be positive");
  if (doc.has("frame.sched_slots")) {
    if (doc.has("frame.sched_time")) throw ConfigError("frame.sched_slots: give either sched_slots or sched_time");
    c.sched_slots = checked_int("frame.sched_slots", doc.integer("frame.sched_slots", 0));
  } else {
    const double ts = doc.number("frame.sched_time", 850e-6);
    if (!(ts >= 0.0)) throw ConfigError("frame.sched_time must be non-negative");
    // Guard against 850e-6 / 18e-6 landing a hair above an integer.
    c.sched_slots = static_cast<int>(std::ceil(ts / c.slot_duration - 1e-9));
  }
  c.tx_slots = checked_int("frame.tx_slots", doc.integer("frame.tx_slots", c.tx_slots));
  c.dis = doc.number("frame.dis", c.dis);
  c.rate_refresh_slots =
      checked_int("frame.rate_refresh_slots", doc.integer("frame.rate_refresh_slots", c.rate_refresh_slots));

  try {
    c.policy = parse_policy(doc.text("run.policy", to_string(c.policy)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("run.policy: ") + e.what());
  }
  const long long seed = doc.integer("run.seed", static_cast<long long>(c.seed));
  if (seed < 0) throw ConfigError("run.seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);

  if (doc.has_section("rate_matrix")) {
    RateMatrixSpec m;
    m.nodes_per_train = checked_int("rate_matrix.nodes_per_train", doc.integer("rate_matrix.nodes_per_train", 0));
    if (m.nodes_per_train < 1) throw ConfigError("rate_matrix.nodes_per_train must be at least 1");
    const long long frames = doc.integer("rate_matrix.frames", 0);
    if (frames < 1 || frames > 10000) throw ConfigError("rate_matrix.frames must be at least 1");
    const int dim = 2 * m.nodes_per_train;
    const auto demand = doc.raw("rate_matrix.demand");
    if (!demand) throw ConfigError("rate_matrix.demand is required");
    m.demand = parse_matrix("rate_matrix.demand", *demand, dim);
    for (long long t = 1; t <= frames; ++t) {
      const std::string key = "rate_matrix.rates_" + std::to_string(t);
      const auto text = doc.raw(key);
      if (!text) throw ConfigError(key + " is required");
      m.rates.push_back(parse_matrix(key, *text, dim));
    }
    c.matrix = std::move(m);
  }

  doc.reject_unread();
  c.validate();
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path, const std::vector<std::string>& overrides) {
  KeyValueDoc doc = KeyValueDoc::load(path);
  for (const auto& o : overrides) doc.apply_override(o);
  return scenario_from_doc(doc);
}

std::string default_config_text() {
  return R"(# Two trains on parallel tracks with a periodic obstacle band between them.

[train_a]
position = 0            # x of the locomotive front [m]
speed_kmh = 300
length = 200            # [m]
mr_count = 16
lateral_y = 150         # track line [m]

[train_b]
position = 0
speed_kmh = 150
length = 200
mr_count = 16
lateral_y = 0

[radio]
tx_power_mw = 1000
carrier_ghz = 28
bandwidth_mhz = 1200
noise_dbm_per_mhz = -134
path_loss_exp = 2
hpbw_deg = 30
si_cancellation = 1e-13
efficiency = 1.0

[obstacles]
blockage = 0.4          # blocked fraction of each period
period = 50             # [m]
band_lo = 50            # [m]
band_hi = 100           # [m]
phase = auto            # drawn from the seed, or a number [m]

[traffic]
flows = 200
demand_min_mbit = 30
demand_max_mbit = 50

[frame]
slot_duration = 18e-6   # [s]
sched_time = 850e-6     # [s], rounded up to whole slots
tx_slots = 2000
dis = 250               # communication threshold [m]
rate_refresh_slots = 1

[run]
policy = heuristic
seed = 1
)";
}

Scenario build_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario s;
  s.config = config;
  Instance& inst = s.instance;
  inst.rate_refresh_slots = config.rate_refresh_slots;

  if (config.matrix) {
    const RateMatrixSpec& m = *config.matrix;
    const int n = m.nodes_per_train;
    auto model = std::make_shared<RateMatrixModel>(n, m.rates, config.sched_slots, config.tx_slots);
    inst.window.slot_duration = config.slot_duration;
    inst.window.sched_slots = config.sched_slots;
    inst.window.tx_slots = config.tx_slots;
    inst.window.frame_count = static_cast<std::int64_t>(m.rates.size());
    inst.window.slot_count = inst.window.frame_count * inst.window.frame_slots();
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j)
        if (m.demand(i, j) > 0.0) {
          const int id = static_cast<int>(inst.flows.size());
          inst.flows.push_back({id, model->node_at(i), model->node_at(j), m.demand(i, j), m.demand(i, j), {}});
        }
    inst.model = std::move(model);
    inst.validate();
    return s;
  }

  Deployment dep;
  dep.trains = config.trains;
  dep.radio = config.radio;
  dep.slot_duration = config.slot_duration;
  double phase = 0.0;
  if (config.phase) {
    phase = *config.phase;
  } else {
    auto rng = make_stream(config.seed, "obstacle-phase");
    phase = std::uniform_real_distribution<double>(0.0, config.period_len)(rng);
  }
  dep.field = ObstacleField::from_blockage(config.blockage, config.period_len, config.band_lo,
                                           config.band_hi, phase);

  const double train_len = std::max(config.trains.a.length, config.trains.b.length);
  if (config.dis < train_len) {
    inst.window.slot_duration = config.slot_duration;
    inst.window.sched_slots = config.sched_slots;
    inst.window.tx_slots = config.tx_slots;
  } else {
    inst.window = comm_window(config.trains, config.dis, config.slot_duration, config.sched_slots,
                              config.tx_slots);
  }

  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < config.trains.a.mr_count; ++i)
    for (int j = 0; j < config.trains.b.mr_count; ++j) pairs.emplace_back(NodeId{Train::A, i}, NodeId{Train::B, j});
  for (int j = 0; j < config.trains.b.mr_count; ++j)
    for (int i = 0; i < config.trains.a.mr_count; ++i) pairs.emplace_back(NodeId{Train::B, j}, NodeId{Train::A, i});

  auto rng = make_stream(config.seed, "flow-gen");
  std::uniform_real_distribution<double> demand(config.demand_min_bits, config.demand_max_bits);
  for (int f = 0; f < config.flow_count; ++f) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(f), pairs.size() - 1);
    std::swap(pairs[static_cast<std::size_t>(f)], pairs[pick(rng)]);
    const auto [src, dst] = pairs[static_cast<std::size_t>(f)];
    const double q = config.demand_max_bits > config.demand_min_bits ? demand(rng) : config.demand_min_bits;
    inst.flows.push_back({f, src, dst, q, q, {}});
  }

  s.deployment = dep;
  inst.model = std::make_shared<PhysicalLinkModel>(dep);
  inst.validate();
  return s;
}

ScenarioConfig toy_config() {
  auto rows = [](std::initializer_list<std::initializer_list<double>> r) {
    Eigen::MatrixXd m(6, 6);
    int i = 0;
    for (const auto& row : r) {
      int j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  };
  RateMatrixSpec m;
  m.nodes_per_train = 3;
  m.demand = rows({{0, 0, 0, 18, 0, 2},
                   {0, 0, 0, 0, 12, 4},
                   {0, 0, 0, 0, 0, 6},
                   {0, 0, 5, 0, 0, 0},
                   {6, 0, 0, 0, 0, 0},
                   {0, 10, 5, 0, 0, 0}});
  m.rates.push_back(rows({{0, 4, 4, 3, 0, 0},
                          {4, 0, 4, 0, 0, 0},
                          {4, 4, 0, 0, 0, 3},
                          {3, 0, 0, 0, 4, 4},
                          {0, 0, 0, 4, 0, 4},
                          {0, 0, 3, 4, 4, 0}}));
  m.rates.push_back(rows({{0, 4, 4, 0, 0, 0},
                          {4, 0, 4, 0, 0, 3},
                          {4, 4, 0, 0, 3, 3},
                          {0, 0, 0, 0, 4, 4},
                          {0, 0, 3, 4, 0, 4},
                          {0, 3, 3, 4, 4, 0}}));
  m.rates.push_back(rows({{0, 4, 4, 0, 0, 1},
                          {4, 0, 4, 0, 3, 2},
                          {4, 4, 0, 3, 3, 3},
                          {0, 0, 3, 0, 4, 4},
                          {0, 3, 3, 4, 0, 4},
                          {1, 2, 3, 4, 4, 0}}));
  ScenarioConfig c;
  c.matrix = std::move(m);
  c.slot_duration = 1.0;
  c.sched_slots = 1;
  c.tx_slots = 4;
  c.rate_refresh_slots = 1;
  return c;
}

}  // namespace t2t
