#include "doctest.h"

#include "support.hpp"
#include "t2t/schedule_io.hpp"

using namespace t2t;

TEST_CASE("schedule dumps round-trip") {
  ScenarioConfig c;
  c.dis = 202.0;
  c.flow_count = 30;
  c.tx_slots = 400;
  const Scenario s = build_scenario(c);
  const RunRecord r = run(s, PolicyId::hybrid, true);
  const std::string text = dump_json({s.instance.window, s.instance.flows, r.frames});
  const ScheduleDump d = parse_json(text);
  CHECK(d.window.slot_count == s.instance.window.slot_count);
  CHECK(d.window.tx_slots == s.instance.window.tx_slots);
  REQUIRE(d.flows.size() == 30);
  CHECK(d.flows[4].src == s.instance.flows[4].src);
  CHECK(d.flows[4].demand_bits == s.instance.flows[4].demand_bits);
  REQUIRE(d.frames.size() == r.frames.size());
  CHECK(validate_schedule(d.frames, d.flows, d.window).empty());
  CHECK(dump_json(d) == text);
}

TEST_CASE("malformed dumps are rejected") {
  CHECK_THROWS_AS(parse_json("{"), std::runtime_error);
  CHECK_THROWS_AS(parse_json("{}"), std::runtime_error);
  CHECK_THROWS_AS(parse_json(R"({"window":{"slot_count":1,"slot_duration":1,"frame_count":1,"sched_slots":0,)"
                             R"("tx_slots":1},"flows":[{"id":0,"src":"Q1","dst":"B0","demand_bits":1,)"
                             R"("remaining_bits":1}],"frames":[]})"),
                  std::runtime_error);
}
