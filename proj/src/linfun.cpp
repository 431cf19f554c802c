#include "snpc/linfun.hpp"

namespace snpc {

LinParams LinParams::make(Natural t1, Natural t2, Natural k) {
  if (t1 < 1 || t2 < 1 || k < 1)
    throw DomainError("linear-function parameters must all be >= 1");
  return LinParams{std::move(t1), std::move(t2), std::move(k)};
}

SnpSystem build_pi_add(const LinParams& p) {
  if (p.t1 < 1 || p.t2 < 1 || p.k < 1)
    throw DomainError("linear-function parameters must all be >= 1");
  SnpSystem sys;
  sys.name = "pi_add";
  sys.neurons.push_back(Neuron{
      "s1",
      2 * p.k - 1,
      {FiringRule::make(SpikePattern::plus(SpikePattern::atom(1)), 1, p.t1 - 1)},
      {}});
  sys.neurons.push_back(
      Neuron{"s2", 1, {FiringRule::make(SpikePattern::atom(1), 1, 0)}, {}});
  sys.neurons.push_back(
      Neuron{"s3", 0, {FiringRule::make(SpikePattern::atom(p.k), p.k, p.t2 - 1)}, {}});
  sys.synapses = {{"s1", "s3"}, {"s3", "s2"}};
  sys.output = "s2";
  return sys;
}

Natural linfun_oracle(const LinParams& p) { return p.t1 * p.k + p.t2; }

Natural default_budget(const LinParams& p) {
  return (2 * p.k - 1) * p.t1 + p.t2 + 4;
}

Natural eval_linear(const LinParams& p, EngineMode engine, const Natural& budget) {
  SnpSystem sys = build_pi_add(p);
  SpikeTrace trace = engine == EngineMode::Literal
                         ? run(sys, budget)
                         : run_events(sys, budget);
  if (!trace.halted)
    throw OverBudget("linear-function run exceeded its budget of " + to_dec(budget));
  if (trace.emissions.size() != 2)
    throw TraceShape("expected exactly 2 output emissions, got " +
                     std::to_string(trace.emissions.size()));
  return trace.emissions[1] - trace.emissions[0];
}

}  // namespace snpc
