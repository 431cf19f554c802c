#include "snpc/linfun.hpp"

#include "doctest.h"

using namespace snpc;

TEST_CASE("construction matches the three-neuron layout") {
  SnpSystem sys = build_pi_add(LinParams::make(3, 2, 4));
  REQUIRE(sys.neurons.size() == 3);
  CHECK(sys.neurons[0].id == "s1");
  CHECK(sys.neurons[0].initial_spikes == 7);  // 2k-1
  CHECK(sys.neurons[0].firing[0].delay == 2);  // t1-1
  CHECK(sys.neurons[1].initial_spikes == 1);
  CHECK(sys.neurons[1].firing[0].delay == 0);
  CHECK(sys.neurons[2].initial_spikes == 0);
  CHECK(sys.neurons[2].firing[0].consume == 4);  // k
  CHECK(sys.neurons[2].firing[0].delay == 1);    // t2-1
  CHECK(sys.synapses ==
        std::set<std::pair<std::string, std::string>>{{"s1", "s3"}, {"s3", "s2"}});
  CHECK(sys.output == "s2");
  CHECK(validate_system(sys).ok());

  SnpSystem smallest = build_pi_add(LinParams::make(1, 1, 1));
  CHECK(smallest.neurons[0].initial_spikes == 1);
  CHECK(smallest.neurons[0].firing[0].delay == 0);
  CHECK(smallest.neurons[2].firing[0].delay == 0);
}

TEST_CASE("zero parameters are rejected") {
  CHECK_THROWS_AS(LinParams::make(0, 2, 4), DomainError);
  CHECK_THROWS_AS(LinParams::make(3, 0, 4), DomainError);
  CHECK_THROWS_AS(LinParams::make(3, 2, 0), DomainError);
}

TEST_CASE("closed form") {
  CHECK(linfun_oracle(LinParams::make(3, 2, 4)) == 14);
  CHECK(linfun_oracle(LinParams::make(1, 1, 1)) == 2);
  CHECK(linfun_oracle(LinParams::make(251, 13, 97)) == 24360);
  Natural big = Natural(1) << 100;
  CHECK(linfun_oracle(LinParams::make(big, 7, big)) == big * big + 7);
}

TEST_CASE("eval_linear on both engines") {
  LinParams p324 = LinParams::make(3, 2, 4);
  CHECK(eval_linear(p324, EngineMode::Literal, default_budget(p324)) == 14);
  CHECK(eval_linear(p324, EngineMode::Events, default_budget(p324)) == 14);

  LinParams p111 = LinParams::make(1, 1, 1);
  CHECK(eval_linear(p111, EngineMode::Literal, default_budget(p111)) == 2);

  SpikeTrace trace = run(build_pi_add(p324), default_budget(p324));
  CHECK(trace.emissions == std::vector<Natural>{1, 15});
}

TEST_CASE("grid agreement with the closed form") {
  for (unsigned t1 = 1; t1 <= 5; ++t1) {
    for (unsigned t2 = 1; t2 <= 5; ++t2) {
      for (unsigned k = 1; k <= 5; ++k) {
        LinParams p = LinParams::make(t1, t2, k);
        Natural budget = default_budget(p);
        CHECK(eval_linear(p, EngineMode::Literal, budget) == linfun_oracle(p));
        CHECK(eval_linear(p, EngineMode::Events, budget) == linfun_oracle(p));
      }
    }
  }
}

TEST_CASE("event engine needs far fewer events than ticks") {
  LinParams p = LinParams::make(251, 13, 97);
  SpikeTrace trace = run_events(build_pi_add(p), 100000);
  CHECK(trace.halted);
  REQUIRE(trace.emissions.size() == 2);
  CHECK(trace.emissions[1] - trace.emissions[0] == 24360);
  CHECK(trace.steps_executed < 1000);   // roughly 2k events
  CHECK(trace.final_clock > 24000);
}

TEST_CASE("s3 never re-fires and retains at most k-1 spikes") {
  for (unsigned k : {1, 3, 6}) {
    LinParams p = LinParams::make(2, 3, k);
    SnpSystem sys = build_pi_add(p);
    SystemState state = SystemState::initial(sys);
    int s3_firings = 0;
    while (!is_halted(state, sys)) {
      StepEvents ev = step(state, sys, Policy::Strict);
      for (const auto& f : ev.fired)
        if (sys.neurons[f.neuron].id == "s3") ++s3_firings;
    }
    CHECK(s3_firings == 1);
    CHECK(state.neurons[2].spikes <= Natural(k) - 1);
  }
}

TEST_CASE("budget errors") {
  LinParams p = LinParams::make(3, 2, 4);
  CHECK_THROWS_AS(eval_linear(p, EngineMode::Literal, 3), OverBudget);
  CHECK_THROWS_AS(eval_linear(p, EngineMode::Events, 2), OverBudget);
  // The default budget covers the whole computation including tail firings.
  CHECK(default_budget(p) == 27);
  SpikeTrace trace = run(build_pi_add(p), default_budget(p));
  CHECK(trace.halted);
}
