#pragma once

#include "snpc/system.hpp"

namespace snpc {

// Strict faults on any neuron with more than one applicable rule, so
// nondeterminism is loud; Permissive resolves it by taking the first rule in
// applicable_rules order (firing before forgetting, then declaration order).
enum class Policy { Strict, Permissive };

enum class EngineMode { Literal, Events };

struct AmbiguousChoice : Error {
  using Error::Error;
};

struct OverBudget : Error {
  using Error::Error;
};

struct RuleRef {
  bool firing;
  size_t index;
  bool operator==(const RuleRef&) const = default;
};

// Firing rules whose compiled set contains `count` with count >= consume,
// followed by forgetting rules with exact == count; declaration order within
// each class.
std::vector<RuleRef> applicable_rules(const Neuron& neuron, const Natural& count);

struct ClosedWindow {
  Natural from;
  Natural until;  // inclusive; the paper's refractory steps [q+1, q+d-1]
};

struct NeuronState {
  Natural spikes;
  Natural inbox;  // delivered this step, usable from the next
  std::optional<ClosedWindow> receive_closed;
  Natural fire_eligible_at = 1;
  std::optional<Natural> pending_emission;  // absolute step of the scheduled release
};

struct SystemState {
  Natural clock;  // steps executed; the next step is clock + 1
  std::vector<NeuronState> neurons;

  static SystemState initial(const SnpSystem& sys);
};

struct StepEvents {
  struct Fired {
    size_t neuron;
    size_t rule;
    Natural consumed;
    Natural emits_at;
  };
  struct Forgot {
    size_t neuron;
    size_t rule;
    Natural removed;
  };
  struct Released {
    size_t neuron;
    bool output;
  };
  struct Delivery {
    size_t from;
    size_t to;
    bool lost;  // target was receive-closed
  };

  Natural step;
  std::vector<Fired> fired;
  std::vector<Forgot> forgot;
  std::vector<Released> released;
  std::vector<Delivery> deliveries;
  std::vector<std::pair<size_t, Natural>> absorbed;  // (neuron, spikes made usable)
};

// Executes exactly one global step t = clock + 1:
//   1. rule application: every neuron with fire_eligible_at <= t, no pending
//      emission and an applicable rule applies exactly one. Firing consumes r
//      spikes now, schedules the emission for t + d, closes the neuron for
//      receiving during [t+1, t+d-1] and makes it next fire-eligible at
//      t+d+1. Forgetting removes its s spikes.
//   2. release: a neuron whose pending emission is due at t sends one spike
//      along every outgoing synapse; the output neuron's release is the
//      observable emission.
//   3. delivery: spikes released at t land in open successors' inboxes
//      (receive-closed successors lose them) and become usable from t + 1.
// Initial spikes are usable at step 1.
StepEvents step(SystemState& state, const SnpSystem& sys, Policy policy);

// No pending emission and no applicable rule anywhere.
bool is_halted(const SystemState& state, const SnpSystem& sys);

struct SpikeTrace {
  std::vector<Natural> emissions;  // steps at which the output neuron released
  bool halted = false;
  Natural steps_executed;  // run: steps == final clock; run_events: events
  Natural final_clock;
};

// Literal engine: ticks every step until halt or budget steps.
// Over budget is reported as halted == false with steps_executed == budget.
SpikeTrace run(const SnpSystem& sys, const Natural& budget_steps,
               Policy policy = Policy::Strict);

// Event-jump engine: advances the clock directly to the next step at which
// anything can happen (an emission falls due, or a neuron with an applicable
// rule becomes fire-eligible). Produces the identical emission sequence to
// run(); the budget counts events, not ticks. tick_horizon, when set, stops
// the run before the clock would pass it (for equivalence tests against
// budget-bounded literal runs).
SpikeTrace run_events(const SnpSystem& sys, const Natural& budget_events,
                      Policy policy = Policy::Strict,
                      const std::optional<Natural>& tick_horizon = std::nullopt);

}  // namespace snpc
