#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "t2t/geometry.hpp"
#include "t2t/link_model.hpp"

namespace t2t {

/// A directed traffic demand between MRs on different trains.
struct Flow {
  int id = 0;
  NodeId src;
  NodeId dst;
  double demand_bits = 0.0;
  double remaining_bits = 0.0;
  std::optional<std::int64_t> completed_frame;

  bool pending() const { return remaining_bits > 0.0; }
};

/// What a scheduler runs on: the rate source, the frame layout and the
/// initial flow states. Flow ids equal their positions in `flows`.
struct Instance {
  std::shared_ptr<const LinkModel> model;
  CommWindow window;
  std::vector<Flow> flows;
  /// Realized rates are re-evaluated whenever the active set or a hop's line
  /// of sight changes, and at least every this many slots.
  int rate_refresh_slots = 1;

  double slot_duration() const { return window.slot_duration; }
  void validate() const;
};

/// One flow's mode for a frame, with its interference-free planning rate.
struct PlannedFlow {
  int flow = 0;
  std::optional<NodeId> relay;
  double rate = 0.0;
};

/// Both blockage probes of a flow taken during mode selection.
struct Probe {
  int flow = 0;
  bool blocked_first = false;
  bool blocked_last = false;
};

struct ModeSelection {
  std::vector<PlannedFlow> direct;  ///< F_A
  std::vector<PlannedFlow> relay;   ///< F_B
  std::vector<Probe> probes;
};

struct TxRecord {
  int flow = 0;
  std::optional<NodeId> relay;
  double rate = 0.0;       ///< realized [bit/s]
  double remaining = 0.0;  ///< after this slot
};

struct SlotRecord {
  std::int64_t slot = 0;  ///< global slot index
  std::vector<TxRecord> tx;
};

/// Slot-by-slot record of one frame. Only slots with transmissions appear.
struct FrameSchedule {
  std::int64_t frame = 0;
  std::vector<PlannedFlow> modes;  ///< admission order, one mode per flow
  std::vector<SlotRecord> slots;
  std::vector<int> completed;
  double delivered_bits = 0.0;
};

/// Algorithm 1: best of the geometric relay candidates at the frame's first
/// transmission slot. Empty when no candidate has a positive rate.
std::optional<PlannedFlow> select_relay(const Flow& flow, std::int64_t frame,
                                        const Instance& inst);

/// Algorithm 2: direct mode for flows clear at the first transmission slot,
/// relay mode for flows blocked at both the first and the last one.
ModeSelection select_modes(std::span<const Flow> flows, std::int64_t frame,
                           const Instance& inst);

double slots_needed(double remaining_bits, double rate, double slot_duration);

/// Ascending slots_needed, ties by flow id.
void sort_by_slots_needed(std::vector<PlannedFlow>& plan, std::span<const Flow> flows,
                          double slot_duration);

/// Algorithm 3: F_A then F_B, each in ascending slots_needed, through the
/// slot engine. Updates `flows` in place.
FrameSchedule schedule_frame(const ModeSelection& selection, std::int64_t frame,
                             const Instance& inst, std::vector<Flow>& flows);

/// Runs the transmission phase of one frame with flows admitted in the given
/// order whenever their node roles are free.
FrameSchedule run_transmission_phase(std::vector<PlannedFlow> order, std::int64_t frame,
                                     const Instance& inst, std::vector<Flow>& flows);

// ---------------------------------------------------------------------------
// Feasibility checks against the problem constraints.

struct Violation {
  std::int64_t frame = 0;
  std::int64_t slot = -1;
  std::string kind;  ///< mode, phase, exclusivity, traffic, completion, reappear, relay, flow
  std::string detail;
};

std::string to_string(const Violation& v);

/// Replays frames in order and reports every constraint breach.
class ScheduleValidator {
 public:
  ScheduleValidator(std::span<const Flow> initial, const CommWindow& window);

  std::vector<Violation> check(const FrameSchedule& frame);

  double delivered_bits() const { return delivered_; }
  int completed() const { return completed_count_; }
  std::span<const double> remaining() const { return remaining_; }

 private:
  std::vector<Flow> flows_;
  CommWindow window_;
  std::vector<double> remaining_;
  std::vector<bool> done_;
  double delivered_ = 0.0;
  int completed_count_ = 0;
  std::int64_t last_frame_ = -1;
};

std::vector<Violation> validate_schedule(std::span<const FrameSchedule> frames,
                                         std::span<const Flow> initial, const CommWindow& window);

}  // namespace t2t
