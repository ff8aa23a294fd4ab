#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "t2t/scheduler.hpp"

namespace t2t {

enum class PolicyId { heuristic, direct, hybrid, random };

std::string to_string(PolicyId p);
/// Throws std::invalid_argument for unknown names.
PolicyId parse_policy(const std::string& name);
inline constexpr PolicyId kAllPolicies[] = {PolicyId::heuristic, PolicyId::direct, PolicyId::hybrid,
                                            PolicyId::random};

/// Flows clear at the first transmission slot, ascending slots_needed.
/// Blocked flows sit the frame out.
std::vector<PlannedFlow> direct_only_modes(std::span<const Flow> flows, std::int64_t frame,
                                           const Instance& inst);

/// Faster of direct and the best relay over every other MR (direct on ties),
/// all flows mixed in ascending slots_needed.
std::vector<PlannedFlow> hybrid_selective_modes(std::span<const Flow> flows, std::int64_t frame,
                                                const Instance& inst);

/// A fair coin per flow picks the mode; relay mode draws a uniform MR other
/// than the flow ends. Direct-mode flows go first, each group in flow order.
std::vector<PlannedFlow> random_modes(std::span<const Flow> flows, std::int64_t frame,
                                      const Instance& inst, std::mt19937_64& rng);

struct PolicyRun {
  std::vector<FrameSchedule> frames;
  std::vector<Flow> flows;  ///< final states
  int completed = 0;
  double delivered_bits = 0.0;
};

using FrameObserver = std::function<void(const FrameSchedule&)>;

/// Plays every frame of the window with `policy`. `rng` is only drawn from
/// by the random policy.
PolicyRun run_policy(PolicyId policy, const Instance& inst, std::mt19937_64& rng,
                     const FrameObserver& observe = {});

}  // namespace t2t
