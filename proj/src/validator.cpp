#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "t2t/scheduler.hpp"

namespace t2t {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

std::string to_string(const Violation& v) {
  std::ostringstream os;
  os << "frame " << v.frame;
  if (v.slot >= 0) os << " slot " << v.slot;
  os << ": " << v.kind << ": " << v.detail;
  return os.str();
}

ScheduleValidator::ScheduleValidator(std::span<const Flow> initial, const CommWindow& window)
    : flows_(initial.begin(), initial.end()), window_(window) {
  for (const Flow& f : flows_) {
    remaining_.push_back(f.remaining_bits);
    done_.push_back(!f.pending());
  }
}

std::vector<Violation> ScheduleValidator::check(const FrameSchedule& fs) {
  std::vector<Violation> out;
  const std::int64_t t = fs.frame;
  auto flag = [&](std::int64_t slot, const char* kind, std::string detail) {
    out.push_back({t, slot, kind, std::move(detail)});
  };
  auto known = [&](int id) { return id >= 0 && id < static_cast<int>(flows_.size()); };

  if (t <= last_frame_) flag(-1, "phase", "frame index does not advance");
  if (t < 0 || (window_.frame_count > 0 && t >= window_.frame_count))
    flag(-1, "phase", "frame outside the communication window");
  last_frame_ = std::max(last_frame_, t);

  std::map<int, std::optional<NodeId>> mode;
  for (const PlannedFlow& p : fs.modes) {
    if (!known(p.flow)) {
      flag(-1, "flow", "unknown flow " + std::to_string(p.flow));
      continue;
    }
    if (!mode.emplace(p.flow, p.relay).second)
      flag(-1, "mode", "flow " + std::to_string(p.flow) + " has more than one mode");
    if (done_[p.flow]) flag(-1, "reappear", "flow " + std::to_string(p.flow) + " already completed");
    const Flow& f = flows_[p.flow];
    if (p.relay && (*p.relay == f.src || *p.relay == f.dst))
      flag(-1, "relay", "flow " + std::to_string(p.flow) + " relays through its own end");
  }

  const std::int64_t lo = window_.first_tx_slot(t);
  const std::int64_t hi = window_.frame_start(t) + window_.frame_slots();
  std::vector<int> completed;
  double delivered = 0.0;
  std::int64_t prev_slot = -1;

  for (const SlotRecord& rec : fs.slots) {
    const std::int64_t s = rec.slot;
    if (s < lo || s >= hi) flag(s, "phase", "transmission outside the transmission phase");
    if (s <= prev_slot) flag(s, "phase", "slots out of order");
    prev_slot = s;

    std::map<NodeId, int> tx_use, rx_use;
    std::map<int, int> seen;
    for (const TxRecord& r : rec.tx) {
      const std::string name = "flow " + std::to_string(r.flow);
      if (!known(r.flow)) {
        flag(s, "flow", "unknown " + name);
        continue;
      }
      if (++seen[r.flow] > 1) flag(s, "mode", name + " transmits twice in one slot");
      const Flow& f = flows_[r.flow];
      auto m = mode.find(r.flow);
      if (m == mode.end())
        flag(s, "mode", name + " transmits without a mode for this frame");
      else if (m->second != r.relay)
        flag(s, "mode", name + " switches mode within the frame");
      if (r.relay && (*r.relay == f.src || *r.relay == f.dst))
        flag(s, "relay", name + " relays through its own end");
      if (done_[r.flow]) {
        flag(s, "reappear", name + " transmits after completion");
        continue;
      }

      ++tx_use[f.src];
      ++rx_use[f.dst];
      if (r.relay) {
        ++tx_use[*r.relay];
        ++rx_use[*r.relay];
      }

      const double before = remaining_[r.flow];
      if (!(r.rate >= 0.0)) flag(s, "traffic", name + " has a negative rate");
      const double sent = std::min(std::max(r.rate, 0.0) * window_.slot_duration, before);
      const double expect = before - sent;
      if (!close(expect, r.remaining))
        flag(s, "traffic", name + " remaining " + std::to_string(r.remaining) + " but expected " +
                               std::to_string(expect));
      remaining_[r.flow] = r.remaining;
      delivered += before - r.remaining;
      if (r.remaining <= 0.0) {
        done_[r.flow] = true;
        completed.push_back(r.flow);
      }
    }
    for (const auto& [node, n] : tx_use)
      if (n > 1) flag(s, "exclusivity", to_string(node) + " transmits for " + std::to_string(n) + " flows");
    for (const auto& [node, n] : rx_use)
      if (n > 1) flag(s, "exclusivity", to_string(node) + " receives for " + std::to_string(n) + " flows");
  }

  std::vector<int> claimed = fs.completed;
  std::sort(claimed.begin(), claimed.end());
  std::sort(completed.begin(), completed.end());
  if (claimed != completed) flag(-1, "completion", "completed set does not match the drained flows");
  if (!close(delivered, fs.delivered_bits)) flag(-1, "traffic", "delivered bits do not add up");

  delivered_ += delivered;
  completed_count_ += static_cast<int>(completed.size());
  return out;
}

std::vector<Violation> validate_schedule(std::span<const FrameSchedule> frames,
                                         std::span<const Flow> initial, const CommWindow& window) {
  ScheduleValidator v(initial, window);
  std::vector<Violation> out;
  for (const FrameSchedule& f : frames) {
    auto more = v.check(f);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

}  // namespace t2t
