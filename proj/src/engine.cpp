#include "snpc/engine.hpp"

namespace snpc {
namespace {

std::vector<std::vector<size_t>> successor_table(const SnpSystem& sys) {
  std::vector<std::vector<size_t>> table(sys.neurons.size());
  for (const auto& [from, to] : sys.synapses) {
    auto f = sys.neuron_index(from);
    auto t = sys.neuron_index(to);
    if (f && t) table[*f].push_back(*t);
  }
  return table;
}

bool receive_closed_at(const NeuronState& st, const Natural& t) {
  return st.receive_closed && t >= st.receive_closed->from &&
         t <= st.receive_closed->until;
}

bool has_applicable_rule(const Neuron& neuron, const Natural& count) {
  for (const FiringRule& rule : neuron.firing)
    if (count >= rule.consume && rule.set.contains(count)) return true;
  for (const ForgettingRule& rule : neuron.forgetting)
    if (rule.exact == count) return true;
  return false;
}

// First applicable rule in applicable_rules order, without materializing the
// list; Strict faults when a second one exists.
std::optional<RuleRef> pick_rule(const Neuron& neuron, const Natural& count,
                                 Policy policy, const Natural& step_for_error) {
  std::optional<RuleRef> first;
  unsigned matches = 0;
  for (size_t i = 0; i < neuron.firing.size() && matches < 2; ++i) {
    const FiringRule& rule = neuron.firing[i];
    if (count >= rule.consume && rule.set.contains(count)) {
      if (!first) first = RuleRef{true, i};
      ++matches;
    }
  }
  for (size_t i = 0; i < neuron.forgetting.size() && matches < 2; ++i) {
    if (neuron.forgetting[i].exact == count) {
      if (!first) first = RuleRef{false, i};
      ++matches;
    }
  }
  if (policy == Policy::Strict && matches > 1)
    throw AmbiguousChoice("neuron " + neuron.id +
                          " has more than one applicable rule at step " +
                          to_dec(step_for_error));
  return first;
}

StepEvents step_impl(SystemState& state, const SnpSystem& sys,
                     const std::vector<std::vector<size_t>>& successors,
                     Policy policy) {
  const Natural t = state.clock + 1;
  StepEvents events;
  events.step = t;

  // Phase 1: rule application under maximal parallelism. Applicability
  // depends only on each neuron's own usable count, so a single in-place
  // pass is equivalent to a simultaneous one.
  for (size_t i = 0; i < sys.neurons.size(); ++i) {
    const Neuron& neuron = sys.neurons[i];
    NeuronState& st = state.neurons[i];
    if (st.pending_emission) continue;
    if (st.fire_eligible_at > t) continue;
    std::optional<RuleRef> picked = pick_rule(neuron, st.spikes, policy, t);
    if (!picked) continue;
    const RuleRef chosen = *picked;
    if (chosen.firing) {
      const FiringRule& rule = neuron.firing[chosen.index];
      st.spikes -= rule.consume;
      Natural emits_at = t + rule.delay;
      st.pending_emission = emits_at;
      st.fire_eligible_at = emits_at + 1;
      if (rule.delay >= 2)
        st.receive_closed = ClosedWindow{t + 1, emits_at - 1};
      else
        st.receive_closed.reset();
      events.fired.push_back({i, chosen.index, rule.consume, emits_at});
    } else {
      const ForgettingRule& rule = neuron.forgetting[chosen.index];
      st.spikes -= rule.exact;
      events.forgot.push_back({i, chosen.index, rule.exact});
    }
  }

  // Phase 2: release due emissions.
  std::vector<size_t> releasing;
  for (size_t i = 0; i < sys.neurons.size(); ++i) {
    NeuronState& st = state.neurons[i];
    if (st.pending_emission && *st.pending_emission == t) {
      st.pending_emission.reset();
      releasing.push_back(i);
      events.released.push_back({i, sys.neurons[i].id == sys.output});
    }
  }

  // Phase 3: deliver to open successors; closed ones lose the spike.
  for (size_t i : releasing) {
    for (size_t j : successors[i]) {
      const bool lost = receive_closed_at(state.neurons[j], t);
      if (!lost) state.neurons[j].inbox += 1;
      events.deliveries.push_back({i, j, lost});
    }
  }

  // Delivered spikes become usable at the end of the step.
  for (size_t i = 0; i < state.neurons.size(); ++i) {
    NeuronState& st = state.neurons[i];
    if (st.inbox > 0) {
      events.absorbed.push_back({i, st.inbox});
      st.spikes += st.inbox;
      st.inbox = 0;
    }
  }

  state.clock = t;
  return events;
}

void require_valid(const SnpSystem& sys) {
  ValidationReport report = validate_system(sys);
  if (!report.ok())
    throw DomainError("invalid system: " + report.errors.front().message);
}

}  // namespace

std::vector<RuleRef> applicable_rules(const Neuron& neuron, const Natural& count) {
  std::vector<RuleRef> out;
  for (size_t i = 0; i < neuron.firing.size(); ++i) {
    const FiringRule& rule = neuron.firing[i];
    if (count >= rule.consume && rule.set.contains(count)) out.push_back({true, i});
  }
  for (size_t i = 0; i < neuron.forgetting.size(); ++i) {
    if (neuron.forgetting[i].exact == count) out.push_back({false, i});
  }
  return out;
}

SystemState SystemState::initial(const SnpSystem& sys) {
  SystemState state;
  state.clock = 0;
  state.neurons.resize(sys.neurons.size());
  for (size_t i = 0; i < sys.neurons.size(); ++i) {
    state.neurons[i].spikes = sys.neurons[i].initial_spikes;
    state.neurons[i].inbox = 0;
    state.neurons[i].fire_eligible_at = 1;
  }
  return state;
}

StepEvents step(SystemState& state, const SnpSystem& sys, Policy policy) {
  return step_impl(state, sys, successor_table(sys), policy);
}

bool is_halted(const SystemState& state, const SnpSystem& sys) {
  for (size_t i = 0; i < state.neurons.size(); ++i) {
    const NeuronState& st = state.neurons[i];
    if (st.pending_emission) return false;
    if (st.inbox != 0) return false;
    if (has_applicable_rule(sys.neurons[i], st.spikes)) return false;
  }
  return true;
}

SpikeTrace run(const SnpSystem& sys, const Natural& budget_steps, Policy policy) {
  if (budget_steps < 1) throw DomainError("run: budget must be >= 1");
  require_valid(sys);
  const auto successors = successor_table(sys);
  SystemState state = SystemState::initial(sys);
  SpikeTrace trace;
  while (true) {
    if (is_halted(state, sys)) {
      trace.halted = true;
      break;
    }
    if (state.clock >= budget_steps) {
      trace.halted = false;
      break;
    }
    StepEvents events = step_impl(state, sys, successors, policy);
    for (const auto& rel : events.released)
      if (rel.output) trace.emissions.push_back(events.step);
  }
  trace.steps_executed = state.clock;
  trace.final_clock = state.clock;
  return trace;
}

SpikeTrace run_events(const SnpSystem& sys, const Natural& budget_events, Policy policy,
                      const std::optional<Natural>& tick_horizon) {
  require_valid(sys);
  const auto successors = successor_table(sys);
  SystemState state = SystemState::initial(sys);
  SpikeTrace trace;
  Natural events_executed = 0;

  while (true) {
    // Next step at which anything can happen: the earliest due emission or
    // the earliest step a rule-capable neuron is allowed to fire. Between
    // those steps every phase is a no-op, so the clock may jump.
    std::optional<Natural> next;
    for (size_t i = 0; i < state.neurons.size(); ++i) {
      const NeuronState& st = state.neurons[i];
      std::optional<Natural> candidate;
      if (st.pending_emission) {
        candidate = *st.pending_emission;
      } else if (has_applicable_rule(sys.neurons[i], st.spikes)) {
        candidate = std::max(Natural(state.clock + 1), st.fire_eligible_at);
      }
      if (candidate && (!next || *candidate < *next)) next = candidate;
    }
    if (!next) {
      trace.halted = true;
      break;
    }
    if (tick_horizon && *next > *tick_horizon) {
      trace.halted = false;
      state.clock = *tick_horizon;
      break;
    }
    if (events_executed >= budget_events) {
      trace.halted = false;
      break;
    }
    state.clock = *next - 1;
    StepEvents events = step_impl(state, sys, successors, policy);
    ++events_executed;
    for (const auto& rel : events.released)
      if (rel.output) trace.emissions.push_back(events.step);
  }
  trace.steps_executed = events_executed;
  trace.final_clock = state.clock;
  return trace;
}

}  // namespace snpc
