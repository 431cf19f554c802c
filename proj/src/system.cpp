#include "snpc/system.hpp"

#include <unordered_map>
#include <unordered_set>

namespace snpc {

FiringRule FiringRule::make(SpikePattern pattern, Natural consume, Natural delay) {
  if (consume < 1) throw DomainError("firing rule must consume at least one spike");
  SpikeSet set = compile_pattern(pattern);
  return FiringRule{std::move(pattern), std::move(consume), std::move(delay),
                    std::move(set)};
}

ForgettingRule ForgettingRule::make(Natural exact) {
  if (exact < 1) throw DomainError("forgetting rule must remove at least one spike");
  return ForgettingRule{std::move(exact)};
}

std::optional<size_t> SnpSystem::neuron_index(const std::string& id) const {
  for (size_t i = 0; i < neurons.size(); ++i)
    if (neurons[i].id == id) return i;
  return std::nullopt;
}

ValidationReport validate_system(const SnpSystem& sys) {
  ValidationReport report;
  auto error = [&report](Violation v) { report.errors.push_back(std::move(v)); };

  std::unordered_set<std::string> seen;
  for (const Neuron& n : sys.neurons) {
    if (n.id.empty())
      error({Violation::Site::Neuron, n.id, false, 0, {}, "neuron id is empty"});
    if (!seen.insert(n.id).second)
      error({Violation::Site::Neuron, n.id, false, 0, {}, "duplicate neuron id: " + n.id});
  }

  for (const auto& [from, to] : sys.synapses) {
    if (from == to)
      error({Violation::Site::Synapse, "", false, 0, {from, to},
             "self-synapse on " + from});
    if (!seen.count(from))
      error({Violation::Site::Synapse, "", false, 0, {from, to},
             "synapse source is not a declared neuron: " + from});
    if (!seen.count(to))
      error({Violation::Site::Synapse, "", false, 0, {from, to},
             "synapse target is not a declared neuron: " + to});
  }

  if (!seen.count(sys.output))
    error({Violation::Site::Output, "", false, 0, {},
           "unknown output neuron: " + sys.output});

  for (const Neuron& n : sys.neurons) {
    for (size_t i = 0; i < n.firing.size(); ++i) {
      const FiringRule& rule = n.firing[i];
      if (rule.consume < 1) {
        error({Violation::Site::Rule, n.id, true, i, {},
               "firing rule consumes no spikes"});
        continue;
      }
      if (rule.set.empty() || rule.set.min() < rule.consume)
        error({Violation::Site::Rule, n.id, true, i, {},
               "pattern admits a count below the " + to_dec(rule.consume) +
                   " spikes the rule consumes"});
    }
    for (size_t i = 0; i < n.forgetting.size(); ++i) {
      const ForgettingRule& rule = n.forgetting[i];
      if (rule.exact < 1) {
        error({Violation::Site::Rule, n.id, false, i, {},
               "forgetting rule removes no spikes"});
        continue;
      }
      for (const FiringRule& f : n.firing) {
        if (rule.exact >= f.consume && f.set.contains(rule.exact)) {
          report.warnings.push_back({Violation::Site::Rule, n.id, false, i, {},
                                     "forgetting rule at " + to_dec(rule.exact) +
                                         " spikes overlaps a firing rule"});
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace snpc
