#pragma once

#include <string>
#include <vector>

#include "t2t/scheduler.hpp"

namespace t2t {

/// Everything the validator needs, as written by `t2t run --dump`.
struct ScheduleDump {
  CommWindow window;
  std::vector<Flow> flows;  ///< initial states
  std::vector<FrameSchedule> frames;
};

std::string dump_json(const ScheduleDump& dump);
/// Throws std::runtime_error on malformed input.
ScheduleDump parse_json(const std::string& text);

}  // namespace t2t
