#include "snpc/engine.hpp"

#include "doctest.h"
#include "snpc/linfun.hpp"
#include "snpc/selftest.hpp"

using namespace snpc;

namespace {

SnpSystem single_neuron_system() {
  SnpSystem sys;
  sys.name = "one";
  sys.neurons.push_back(
      Neuron{"n", 1, {FiringRule::make(SpikePattern::atom(1), 1, 0)}, {}});
  sys.output = "n";
  return sys;
}

// a fires at step 1 with the given delay; b fires at step 1 and sends one
// spike to a, arriving at 1 + b_delay.
SnpSystem delivery_probe(const Natural& a_delay, const Natural& b_delay) {
  SnpSystem sys;
  sys.name = "probe";
  sys.neurons.push_back(
      Neuron{"a", 1, {FiringRule::make(SpikePattern::atom(1), 1, a_delay)}, {}});
  sys.neurons.push_back(
      Neuron{"b", 1, {FiringRule::make(SpikePattern::atom(1), 1, b_delay)}, {}});
  sys.synapses = {{"b", "a"}};
  sys.output = "a";
  return sys;
}

}  // namespace

TEST_CASE("applicable_rules ordering and conditions") {
  Neuron n{"x",
           0,
           {FiringRule::make(SpikePattern::plus(SpikePattern::atom(1)), 1, 2),
            FiringRule::make(SpikePattern::atom(4), 4, 1)},
           {ForgettingRule::make(3), ForgettingRule::make(4)}};

  auto at7 = applicable_rules(n, 7);
  REQUIRE(at7.size() == 1);
  CHECK(at7[0] == RuleRef{true, 0});

  auto at4 = applicable_rules(n, 4);  // both firing rules plus forgetting a^4
  REQUIRE(at4.size() == 3);
  CHECK(at4[0] == RuleRef{true, 0});
  CHECK(at4[1] == RuleRef{true, 1});
  CHECK(at4[2] == RuleRef{false, 1});

  auto at3 = applicable_rules(n, 3);
  REQUIRE(at3.size() == 2);
  CHECK(at3[0] == RuleRef{true, 0});
  CHECK(at3[1] == RuleRef{false, 0});

  CHECK(applicable_rules(n, 0).empty());

  Neuron gated{"g", 0, {FiringRule::make(SpikePattern::atom(4), 4, 1)}, {}};
  CHECK(applicable_rules(gated, 2).empty());  // 2 not in {4}

  // In the set but below the consumption: not applicable.
  std::vector<SpikePattern> alts;
  alts.push_back(SpikePattern::atom(1));
  alts.push_back(SpikePattern::atom(4));
  Neuron starved{
      "s", 0, {FiringRule{SpikePattern::alt(alts), 2, 0, compile_pattern(SpikePattern::alt(alts))}}, {}};
  CHECK(applicable_rules(starved, 1).empty());
  CHECK(applicable_rules(starved, 4).size() == 1);
}

TEST_CASE("validate_system catches the spec violations") {
  SnpSystem sys = build_pi_add(LinParams::make(3, 2, 4));
  CHECK(validate_system(sys).ok());

  SnpSystem self = sys;
  self.synapses.insert({"s1", "s1"});
  auto report = validate_system(self);
  REQUIRE_FALSE(report.ok());
  CHECK(report.errors[0].message.find("self-synapse") != std::string::npos);

  SnpSystem bad_out = sys;
  bad_out.output = "s9";
  auto report2 = validate_system(bad_out);
  REQUIRE_FALSE(report2.ok());
  CHECK(report2.errors[0].message.find("unknown output neuron") != std::string::npos);

  // n >= r violated: pattern admits 1 but the rule consumes 2.
  SnpSystem bad_rule = sys;
  std::vector<SpikePattern> alts;
  alts.push_back(SpikePattern::atom(1));
  alts.push_back(SpikePattern::atom(4));
  bad_rule.neurons[0].firing[0] =
      FiringRule::make(SpikePattern::alt(std::move(alts)), 2, 0);
  CHECK_FALSE(validate_system(bad_rule).ok());

  // Firing/forgetting overlap is a warning, not an error.
  SnpSystem overlap = sys;
  overlap.neurons[0].forgetting.push_back(ForgettingRule::make(5));
  auto report3 = validate_system(overlap);
  CHECK(report3.ok());
  CHECK(report3.warnings.size() == 1);
}

TEST_CASE("step walk-through of pi-add(3,2,4)") {
  SnpSystem sys = build_pi_add(LinParams::make(3, 2, 4));
  SystemState state = SystemState::initial(sys);

  // Step 1: s2 (delay 0) fires and emits immediately; s1 fires with delay 2.
  StepEvents ev1 = step(state, sys, Policy::Strict);
  CHECK(ev1.step == 1);
  REQUIRE(ev1.fired.size() == 2);
  CHECK(state.neurons[0].spikes == 6);
  REQUIRE(state.neurons[0].pending_emission.has_value());
  CHECK(*state.neurons[0].pending_emission == 3);
  CHECK(state.neurons[0].fire_eligible_at == 4);
  REQUIRE(ev1.released.size() == 1);
  CHECK(ev1.released[0].output);
  CHECK(sys.neurons[ev1.released[0].neuron].id == "s2");

  // Steps 2..12: s1 delivers to s3 at 3, 6, 9, 12.
  for (int s = 2; s <= 12; ++s) step(state, sys, Policy::Strict);
  CHECK(state.clock == 12);
  CHECK(state.neurons[2].spikes == 4);  // s3 holds 4 usable spikes

  // Step 13: s3 fires, schedules its emission for 14.
  StepEvents ev13 = step(state, sys, Policy::Strict);
  bool s3_fired = false;
  for (const auto& f : ev13.fired)
    if (sys.neurons[f.neuron].id == "s3") {
      s3_fired = true;
      CHECK(f.emits_at == 14);
    }
  CHECK(s3_fired);
  CHECK(state.neurons[2].spikes == 0);

  // Step 15: the output fires again.
  step(state, sys, Policy::Strict);
  StepEvents ev15 = step(state, sys, Policy::Strict);
  bool output_released = false;
  for (const auto& r : ev15.released)
    if (r.output) output_released = true;
  CHECK(output_released);
}

TEST_CASE("strict policy faults on ambiguity, permissive resolves it") {
  SnpSystem sys;
  sys.name = "amb";
  sys.neurons.push_back(Neuron{"n",
                               1,
                               {FiringRule::make(SpikePattern::atom(1), 1, 0)},
                               {ForgettingRule::make(1)}});
  sys.output = "n";

  SystemState strict_state = SystemState::initial(sys);
  CHECK_THROWS_AS(step(strict_state, sys, Policy::Strict), AmbiguousChoice);

  SystemState permissive_state = SystemState::initial(sys);
  StepEvents ev = step(permissive_state, sys, Policy::Permissive);
  CHECK(ev.fired.size() == 1);  // firing wins over forgetting
  CHECK(ev.forgot.empty());

  SpikeTrace trace = run(sys, 10, Policy::Permissive);
  CHECK(trace.emissions == std::vector<Natural>{1});
}

TEST_CASE("run on the worked examples") {
  SpikeTrace t324 = run(build_pi_add(LinParams::make(3, 2, 4)), 1000);
  CHECK(t324.halted);
  CHECK(t324.emissions == std::vector<Natural>{1, 15});
  CHECK(t324.final_clock == 21);  // s1 drains its last spike at 3*7

  SpikeTrace t111 = run(build_pi_add(LinParams::make(1, 1, 1)), 1000);
  CHECK(t111.halted);
  CHECK(t111.emissions == std::vector<Natural>{1, 3});

  SpikeTrace single = run(single_neuron_system(), 10);
  CHECK(single.halted);
  CHECK(single.emissions == std::vector<Natural>{1});
  CHECK(single.steps_executed == 1);
}

TEST_CASE("run budget semantics") {
  SpikeTrace cut = run(build_pi_add(LinParams::make(3, 2, 4)), 5);
  CHECK_FALSE(cut.halted);
  CHECK(cut.steps_executed == 5);

  CHECK_THROWS_AS(run(single_neuron_system(), 0), DomainError);

  // A system with an unsatisfiable rule halts immediately.
  SnpSystem stuck;
  stuck.name = "stuck";
  stuck.neurons.push_back(
      Neuron{"n", 2, {FiringRule::make(SpikePattern::atom(5), 5, 0)}, {}});
  stuck.output = "n";
  SpikeTrace trace = run(stuck, 10);
  CHECK(trace.halted);
  CHECK(trace.steps_executed == 0);
}

TEST_CASE("refractory window semantics") {
  // a fires at 1 with delay 3: closed during [2, 3], emits at 4.
  // b's spike arrives at 2: lost.
  SpikeTrace lost = run(delivery_probe(3, 1), 20);
  SnpSystem probe = delivery_probe(3, 1);
  SystemState state = SystemState::initial(probe);
  step(state, probe, Policy::Strict);
  StepEvents ev2 = step(state, probe, Policy::Strict);
  REQUIRE(ev2.deliveries.size() == 1);
  CHECK(ev2.deliveries[0].lost);
  for (int s = 3; s <= 6; ++s) step(state, probe, Policy::Strict);
  CHECK(state.neurons[0].spikes == 0);
  CHECK(lost.halted);

  // Arrival exactly at the emission step (4) is allowed.
  SnpSystem open_probe = delivery_probe(3, 3);
  SystemState open_state = SystemState::initial(open_probe);
  for (int s = 1; s <= 4; ++s) {
    StepEvents ev = step(open_state, open_probe, Policy::Strict);
    if (ev.step == 4) {
      REQUIRE(ev.deliveries.size() == 1);
      CHECK_FALSE(ev.deliveries[0].lost);
    }
  }
  CHECK(open_state.neurons[0].spikes == 1);
}

TEST_CASE("spike conservation per step") {
  num::Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    SnpSystem sys = snpc::selftest::random_system(rng, 5);
    SystemState state = SystemState::initial(sys);
    for (int s = 0; s < 200 && !is_halted(state, sys); ++s) {
      std::vector<Natural> before;
      for (const auto& ns : state.neurons) before.push_back(ns.spikes);
      StepEvents ev = step(state, sys, Policy::Permissive);
      std::vector<Natural> consumed(sys.neurons.size(), 0);
      for (const auto& f : ev.fired) consumed[f.neuron] += f.consumed;
      for (const auto& f : ev.forgot) consumed[f.neuron] += f.removed;
      std::vector<Natural> absorbed(sys.neurons.size(), 0);
      for (const auto& [neuron, count] : ev.absorbed) absorbed[neuron] += count;
      for (size_t i = 0; i < sys.neurons.size(); ++i)
        CHECK(state.neurons[i].spikes == before[i] - consumed[i] + absorbed[i]);
    }
  }
}

TEST_CASE("no neuron fires while an emission is pending") {
  num::Rng rng(2025);
  for (int trial = 0; trial < 20; ++trial) {
    SnpSystem sys = snpc::selftest::random_system(rng, 5);
    SystemState state = SystemState::initial(sys);
    for (int s = 0; s < 200 && !is_halted(state, sys); ++s) {
      std::vector<bool> pending_before;
      for (const auto& ns : state.neurons)
        pending_before.push_back(ns.pending_emission.has_value());
      StepEvents ev = step(state, sys, Policy::Permissive);
      for (const auto& f : ev.fired) CHECK_FALSE(pending_before[f.neuron]);
      for (const auto& f : ev.forgot) CHECK_FALSE(pending_before[f.neuron]);
    }
  }
}

TEST_CASE("event-jump engine matches the literal engine") {
  for (unsigned t1 : {1, 2, 5}) {
    for (unsigned t2 : {1, 3}) {
      for (unsigned k : {1, 4, 7}) {
        SnpSystem sys = build_pi_add(LinParams::make(t1, t2, k));
        Natural budget = default_budget(LinParams::make(t1, t2, k));
        SpikeTrace lit = run(sys, budget);
        SpikeTrace ev = run_events(sys, budget);
        CHECK(lit.emissions == ev.emissions);
        CHECK(lit.halted == ev.halted);
        CHECK(lit.final_clock == ev.final_clock);
        CHECK(ev.steps_executed <= lit.steps_executed);
      }
    }
  }

  num::Rng rng(2026);
  for (int trial = 0; trial < 40; ++trial) {
    SnpSystem sys = snpc::selftest::random_system(rng, 6);
    SpikeTrace lit = run(sys, 2000, Policy::Permissive);
    SpikeTrace ev = run_events(sys, 2000, Policy::Permissive, Natural(2000));
    CHECK(lit.emissions == ev.emissions);
    CHECK(lit.halted == ev.halted);
  }
}

TEST_CASE("event budget is reported as an unhalted trace") {
  SnpSystem sys = build_pi_add(LinParams::make(3, 2, 4));
  SpikeTrace ev = run_events(sys, 2);
  CHECK_FALSE(ev.halted);
  CHECK(ev.steps_executed == 2);
}
