#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "t2t/scheduler.hpp"

namespace t2t {

/// Raised when an instance is too large for exhaustive search.
class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int max_flows = 4;
  std::int64_t max_frames = 3;
  int max_tx_slots = 6;
  int max_mr_per_train = 3;
};

/// Throws OracleRefused naming the first exceeded limit. Models whose rates
/// are fixed per frame and free of interference admit up to 2N^2 flows.
void check_oracle_gate(const Instance& inst, const OracleLimits& limits = {});

struct OracleResult {
  int best = 0;
  std::vector<FrameSchedule> witness;
  std::uint64_t nodes = 0;  ///< search nodes visited
};

/// Maximum number of flows that can be completed in the window, with a
/// schedule achieving it. Relays range over every MR other than the flow ends.
OracleResult exhaustive_optimum(const Instance& inst, const OracleLimits& limits = {});

}  // namespace t2t
