#pragma once

#include "snpc/engine.hpp"

namespace snpc {

// The trace of a linear-function run had the wrong shape; an engine bug.
struct TraceShape : Error {
  using Error::Error;
};

struct LinParams {
  Natural t1;
  Natural t2;
  Natural k;

  // All parameters must be >= 1: the construction uses delays t1-1 and t2-1.
  static LinParams make(Natural t1, Natural t2, Natural k);
};

// The three-neuron system computing t1*k + t2:
//   s1: 2k-1 spikes, a+/a -> a; t1-1
//   s2: 1 spike,     a   -> a; 0       (output)
//   s3: 0 spikes,    a^k -> a; t2-1
// with synapses s1 -> s3 -> s2.
SnpSystem build_pi_add(const LinParams& p);

// Closed form t1*k + t2.
Natural linfun_oracle(const LinParams& p);

// Enough literal steps for the whole computation including the tail firings
// of s1: (2k-1)*t1 + t2 + 4.
Natural default_budget(const LinParams& p);

// Runs build_pi_add through the chosen engine and returns the interval
// between the two output emissions. Throws OverBudget when the run does not
// halt within budget and TraceShape when the emission count is not 2.
Natural eval_linear(const LinParams& p, EngineMode engine, const Natural& budget);

}  // namespace snpc
