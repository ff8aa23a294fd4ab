#include "t2t/schedule_io.hpp"

#include <stdexcept>

#include "json.hpp"

namespace t2t {

using nlohmann::json;

namespace {

json relay_json(const std::optional<NodeId>& relay) {
  return relay ? json(to_string(*relay)) : json(nullptr);
}

std::optional<NodeId> relay_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_node(j.get<std::string>());
}

}  // namespace

std::string dump_json(const ScheduleDump& d) {
  json root;
  root["window"] = {{"slot_count", d.window.slot_count},
                    {"slot_duration", d.window.slot_duration},
                    {"frame_count", d.window.frame_count},
                    {"sched_slots", d.window.sched_slots},
                    {"tx_slots", d.window.tx_slots}};
  json flows = json::array();
  for (const Flow& f : d.flows)
    flows.push_back({{"id", f.id},
                     {"src", to_string(f.src)},
                     {"dst", to_string(f.dst)},
                     {"demand_bits", f.demand_bits},
                     {"remaining_bits", f.remaining_bits}});
  root["flows"] = std::move(flows);
  json frames = json::array();
  for (const FrameSchedule& fs : d.frames) {
    json modes = json::array();
    for (const PlannedFlow& p : fs.modes)
      modes.push_back({{"flow", p.flow}, {"relay", relay_json(p.relay)}, {"rate", p.rate}});
    json slots = json::array();
    for (const SlotRecord& s : fs.slots) {
      json tx = json::array();
      for (const TxRecord& r : s.tx)
        tx.push_back({{"flow", r.flow}, {"relay", relay_json(r.relay)}, {"rate", r.rate}, {"remaining", r.remaining}});
      slots.push_back({{"slot", s.slot}, {"tx", std::move(tx)}});
    }
    frames.push_back({{"frame", fs.frame},
                      {"modes", std::move(modes)},
                      {"slots", std::move(slots)},
                      {"completed", fs.completed},
                      {"delivered_bits", fs.delivered_bits}});
  }
  root["frames"] = std::move(frames);
  return root.dump(1) + "\n";
}

ScheduleDump parse_json(const std::string& text) {
  try {
    const json root = json::parse(text);
    ScheduleDump d;
    const json& w = root.at("window");
    d.window.slot_count = w.at("slot_count").get<std::int64_t>();
    d.window.slot_duration = w.at("slot_duration").get<double>();
    d.window.frame_count = w.at("frame_count").get<std::int64_t>();
    d.window.sched_slots = w.at("sched_slots").get<int>();
    d.window.tx_slots = w.at("tx_slots").get<int>();
    for (const json& f : root.at("flows"))
      d.flows.push_back({f.at("id").get<int>(), parse_node(f.at("src").get<std::string>()),
                         parse_node(f.at("dst").get<std::string>()), f.at("demand_bits").get<double>(),
                         f.at("remaining_bits").get<double>(), {}});
    for (const json& jf : root.at("frames")) {
      FrameSchedule fs;
      fs.frame = jf.at("frame").get<std::int64_t>();
      for (const json& m : jf.at("modes"))
        fs.modes.push_back({m.at("flow").get<int>(), relay_from(m.at("relay")), m.at("rate").get<double>()});
      for (const json& js : jf.at("slots")) {
        SlotRecord s{js.at("slot").get<std::int64_t>(), {}};
        for (const json& r : js.at("tx"))
          s.tx.push_back({r.at("flow").get<int>(), relay_from(r.at("relay")), r.at("rate").get<double>(),
                          r.at("remaining").get<double>()});
        fs.slots.push_back(std::move(s));
      }
      fs.completed = jf.at("completed").get<std::vector<int>>();
      fs.delivered_bits = jf.at("delivered_bits").get<double>();
      d.frames.push_back(std::move(fs));
    }
    return d;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed schedule dump: ") + e.what());
  } catch (const std::logic_error& e) {
    throw std::runtime_error(std::string("malformed schedule dump: ") + e.what());
  }
}

}  // namespace t2t
