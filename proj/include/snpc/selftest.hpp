#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snpc/dsl.hpp"
#include "snpc/numtheory.hpp"

namespace snpc::selftest {

// ---- Independent oracles (deliberately naive; they never touch the code
// paths they are used to check) ----

// Word lengths of the language of p up to max_len, by direct enumeration
// over the pattern tree.
std::set<unsigned long> enumerate_lengths(const SpikePattern& p, unsigned long max_len);

bool trial_division_is_prime(unsigned long n);

// ---- Seeded generators for randomized suites ----

SpikePattern random_pattern(num::Rng& rng, unsigned depth);

// Valid-by-construction system: <= max_neurons neurons, <= 3 rules each,
// every firing rule consuming no more than its pattern's minimum. May be
// nondeterministic; run it with Policy::Permissive.
SnpSystem random_system(num::Rng& rng, unsigned max_neurons);

// ---- Acceptance suite ----

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // first failing case, empty when passed
  double seconds = 0.0;
};

inline constexpr std::uint64_t kDefaultSeed = 20240915;

// Runs the acceptance criteria (all of them, or just `only`), printing one
// PASS/FAIL line per criterion to `out`. Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, std::ostream& out,
                                            std::optional<int> only = std::nullopt);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace snpc::selftest
