#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "snpc/pattern.hpp"

namespace snpc {

// Firing rule E/a^r -> a;d. The compiled pattern set is cached at
// construction and excluded from structural equality.
struct FiringRule {
  SpikePattern pattern;
  Natural consume;  // r >= 1
  Natural delay;    // d >= 0
  SpikeSet set;

  static FiringRule make(SpikePattern pattern, Natural consume, Natural delay);

  bool operator==(const FiringRule& o) const {
    return pattern == o.pattern && consume == o.consume && delay == o.delay;
  }
};

// Forgetting rule a^s -> lambda.
struct ForgettingRule {
  Natural exact;  // s >= 1

  static ForgettingRule make(Natural exact);

  bool operator==(const ForgettingRule&) const = default;
};

struct Neuron {
  std::string id;
  Natural initial_spikes;
  std::vector<FiringRule> firing;
  std::vector<ForgettingRule> forgetting;

  bool operator==(const Neuron&) const = default;
};

struct SnpSystem {
  std::string name = "system";
  std::vector<Neuron> neurons;
  std::set<std::pair<std::string, std::string>> synapses;  // ordered (from, to)
  std::string output;

  std::optional<size_t> neuron_index(const std::string& id) const;

  bool operator==(const SnpSystem&) const = default;
};

struct Violation {
  enum class Site { System, Neuron, Rule, Synapse, Output };
  Site site = Site::System;
  std::string neuron;                            // Site::Neuron / Site::Rule
  bool firing_rule = false;                      // Site::Rule
  size_t rule_index = 0;                         // Site::Rule
  std::pair<std::string, std::string> synapse;   // Site::Synapse
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> errors;
  std::vector<Violation> warnings;

  bool ok() const { return errors.empty(); }
};

// Checks referential integrity (unique ids, declared synapse endpoints and
// output, no self-synapse) and the rule conditions: consume/exact >= 1 and
// n >= r over every firing pattern's set. A forgetting rule whose count is
// also matched by a firing rule is reported as a warning, not an error.
ValidationReport validate_system(const SnpSystem& sys);

}  // namespace snpc
