#pragma once

#include <optional>
#include <vector>

#include "snpc/common.hpp"

namespace snpc {

// Thrown when an exact set computation would materialize more structure than
// the work budget allows (e.g. the union of periodic sets whose thresholds
// differ by hundreds of bits). This is a resource boundary, not a domain
// error: every pattern a rule file or the protocol actually builds stays far
// below it.
struct PatternTooComplex : Error {
  using Error::Error;
};

// Regular expression over the one-letter spike alphabet {a}.
class SpikePattern {
 public:
  enum class Kind { Lambda, Atom, Concat, Union, Plus };

  static SpikePattern lambda();
  static SpikePattern atom(Natural count);                         // count >= 1
  static SpikePattern concat(std::vector<SpikePattern> children);  // >= 2 children
  static SpikePattern alt(std::vector<SpikePattern> children);     // >= 2 children
  static SpikePattern plus(SpikePattern child);

  Kind kind() const { return kind_; }
  const Natural& atom_count() const;
  const std::vector<SpikePattern>& children() const { return children_; }

  bool operator==(const SpikePattern& other) const;

 private:
  SpikePattern(Kind kind, Natural count, std::vector<SpikePattern> children)
      : kind_(kind), count_(std::move(count)), children_(std::move(children)) {}

  Kind kind_;
  Natural count_;
  std::vector<SpikePattern> children_;
};

// An ultimately periodic set of naturals: the compiled form of a unary
// regular language. Members below threshold are listed in finite_part();
// when a periodic part is present, a value n >= threshold is a member
// exactly when n mod period is one of the residues.
//
// Canonical: the finite part lies entirely below the threshold, residues are
// nonempty when the periodic part is present, the threshold is minimal, and
// the period is minimal whenever it is small enough to factor.
class SpikeSet {
 public:
  struct Periodic {
    Natural threshold;
    Natural period;                  // >= 1
    std::vector<Natural> residues;   // sorted, each < period
    bool operator==(const Periodic&) const = default;
  };

  SpikeSet() = default;  // empty set

  static SpikeSet finite(std::vector<Natural> values);
  static SpikeSet make(std::vector<Natural> finite_part, std::optional<Periodic> periodic);

  bool empty() const { return finite_.empty() && !periodic_; }
  bool contains(const Natural& n) const;
  Natural min() const;  // requires !empty()

  const std::vector<Natural>& finite_part() const { return finite_; }
  const std::optional<Periodic>& periodic_part() const { return periodic_; }

  bool operator==(const SpikeSet&) const = default;

 private:
  std::vector<Natural> finite_;
  std::optional<Periodic> periodic_;
};

// {n : a^n is in the language of p}.
SpikeSet compile_pattern(const SpikePattern& p);

bool pattern_matches(const SpikeSet& s, const Natural& n);

}  // namespace snpc
