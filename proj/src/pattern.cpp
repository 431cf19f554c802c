#include "snpc/pattern.hpp"

#include <algorithm>
#include <cstdint>

namespace snpc {

// ---- SpikePattern -----------------------------------------------------------

SpikePattern SpikePattern::lambda() { return SpikePattern(Kind::Lambda, 0, {}); }

SpikePattern SpikePattern::atom(Natural count) {
  if (count < 1) throw DomainError("pattern atom count must be >= 1");
  return SpikePattern(Kind::Atom, std::move(count), {});
}

SpikePattern SpikePattern::concat(std::vector<SpikePattern> children) {
  if (children.size() < 2) throw DomainError("concat needs at least 2 children");
  return SpikePattern(Kind::Concat, 0, std::move(children));
}

SpikePattern SpikePattern::alt(std::vector<SpikePattern> children) {
  if (children.size() < 2) throw DomainError("union needs at least 2 children");
  return SpikePattern(Kind::Union, 0, std::move(children));
}

SpikePattern SpikePattern::plus(SpikePattern child) {
  std::vector<SpikePattern> children;
  children.push_back(std::move(child));
  return SpikePattern(Kind::Plus, 0, std::move(children));
}

const Natural& SpikePattern::atom_count() const {
  if (kind_ != Kind::Atom) throw DomainError("atom_count on non-atom pattern node");
  return count_;
}

bool SpikePattern::operator==(const SpikePattern& other) const {
  return kind_ == other.kind_ && count_ == other.count_ && children_ == other.children_;
}

// ---- SpikeSet ---------------------------------------------------------------

namespace {

constexpr long kCompileBudget = 1 << 22;
constexpr unsigned long kMinimizePeriodLimit = 1 << 16;
constexpr unsigned long kDpLimit = 1 << 22;

struct Budget {
  long remaining = kCompileBudget;

  void charge(long cost) {
    if (cost < 0 || cost > remaining)
      throw PatternTooComplex("pattern set computation exceeds the work budget");
    remaining -= cost;
  }
  void charge_big(const Natural& cost) {
    if (!cost.fits_slong_p())
      throw PatternTooComplex("pattern set computation exceeds the work budget");
    charge(cost.get_si());
  }
};

// Normalization inside SpikeSet::make charges whichever budget is in scope,
// so one compile_pattern call is capped as a whole.
thread_local Budget* g_active_budget = nullptr;

struct BudgetScope {
  Budget* prev;
  explicit BudgetScope(Budget* b) : prev(g_active_budget) { g_active_budget = b; }
  ~BudgetScope() { g_active_budget = prev; }
};

bool sorted_contains(const std::vector<Natural>& sorted, const Natural& value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

void sort_dedupe(std::vector<Natural>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

// Smallest n >= lo with n = r (mod period); requires r < period.
Natural first_point_ge(const Natural& lo, const Natural& period, const Natural& r) {
  Natural rem = lo % period;
  Natural diff = r - rem;
  if (diff < 0) diff += period;
  return lo + diff;
}

// Largest n < hi with n = r (mod period), or nothing when every such n is
// negative.
std::optional<Natural> last_point_lt(const Natural& hi, const Natural& period,
                                     const Natural& r) {
  if (hi <= r) return std::nullopt;
  Natural x = hi - 1;
  return x - Natural((x - r) % period);
}

// Appends every periodic point of (period, residues) lying in [lo, hi).
void materialize(const SpikeSet::Periodic& per, const Natural& lo, const Natural& hi,
                 std::vector<Natural>& out, Budget& budget) {
  if (hi <= lo) return;
  for (const Natural& r : per.residues) {
    for (Natural n = first_point_ge(lo, per.period, r); n < hi; n += per.period) {
      budget.charge(1);
      out.push_back(n);
    }
  }
}

std::vector<unsigned long> ascending_divisors(unsigned long n) {
  std::vector<unsigned long> low, high;
  for (unsigned long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

SpikeSet set_union(const SpikeSet& a, const SpikeSet& b, Budget& budget);
SpikeSet set_sum(const SpikeSet& a, const SpikeSet& b, Budget& budget);
SpikeSet set_plus(const SpikeSet& a, Budget& budget);

SpikeSet set_union(const SpikeSet& a, const SpikeSet& b, Budget& budget) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<Natural> fin = a.finite_part();
  fin.insert(fin.end(), b.finite_part().begin(), b.finite_part().end());
  budget.charge(static_cast<long>(fin.size()));

  const auto& pa = a.periodic_part();
  const auto& pb = b.periodic_part();
  if (!pa && !pb) return SpikeSet::make(std::move(fin), std::nullopt);
  if (pa && !pb) return SpikeSet::make(std::move(fin), *pa);
  if (pb && !pa) return SpikeSet::make(std::move(fin), *pb);

  Natural period;
  mpz_lcm(period.get_mpz_t(), pa->period.get_mpz_t(), pb->period.get_mpz_t());
  budget.charge_big(Natural(period / pa->period) * static_cast<long>(pa->residues.size()) +
                    Natural(period / pb->period) * static_cast<long>(pb->residues.size()));

  std::vector<Natural> residues;
  for (const auto* part : {&*pa, &*pb}) {
    for (const Natural& r : part->residues)
      for (Natural v = r; v < period; v += part->period) residues.push_back(v);
  }

  Natural threshold = std::max(pa->threshold, pb->threshold);
  materialize(*pa, pa->threshold, threshold, fin, budget);
  materialize(*pb, pb->threshold, threshold, fin, budget);
  return SpikeSet::make(std::move(fin),
                        SpikeSet::Periodic{threshold, period, std::move(residues)});
}

std::vector<Natural> rotated_residues(const std::vector<Natural>& residues,
                                      const Natural& shift, const Natural& period) {
  std::vector<Natural> out;
  out.reserve(residues.size());
  for (const Natural& r : residues) out.push_back((r + shift) % period);
  return out;
}

SpikeSet set_sum(const SpikeSet& a, const SpikeSet& b, Budget& budget) {
  if (a.empty() || b.empty()) return SpikeSet();
  std::vector<SpikeSet> components;

  budget.charge(static_cast<long>(a.finite_part().size() * b.finite_part().size()));
  std::vector<Natural> sums;
  for (const Natural& x : a.finite_part())
    for (const Natural& y : b.finite_part()) sums.push_back(x + y);
  if (!sums.empty()) components.push_back(SpikeSet::finite(std::move(sums)));

  const auto& pa = a.periodic_part();
  const auto& pb = b.periodic_part();
  if (pb) {
    for (const Natural& x : a.finite_part()) {
      budget.charge(static_cast<long>(pb->residues.size()));
      components.push_back(SpikeSet::make(
          {}, SpikeSet::Periodic{pb->threshold + x, pb->period,
                                 rotated_residues(pb->residues, x, pb->period)}));
    }
  }
  if (pa) {
    for (const Natural& y : b.finite_part()) {
      budget.charge(static_cast<long>(pa->residues.size()));
      components.push_back(SpikeSet::make(
          {}, SpikeSet::Periodic{pa->threshold + y, pa->period,
                                 rotated_residues(pa->residues, y, pa->period)}));
    }
  }

  if (pa && pb) {
    // Sum of the two periodic tails. With g = gcd of the periods, the stride
    // set {i*Pa + j*Pb} consists of multiples of g; by Sylvester's bound
    // every g*s with s >= (Pa/g - 1)(Pb/g - 1) occurs, and the sporadic
    // representable strides below that are found by a small DP.
    Natural g;
    mpz_gcd(g.get_mpz_t(), pa->period.get_mpz_t(), pb->period.get_mpz_t());
    Natural pa_red = pa->period / g;
    Natural pb_red = pb->period / g;
    Natural bound_big = (pa_red - 1) * (pb_red - 1);
    if (!bound_big.fits_ulong_p() || bound_big.get_ui() > kDpLimit)
      throw PatternTooComplex("periodic-sum stride table too large");
    const unsigned long bound = bound_big.get_ui();
    budget.charge(static_cast<long>(bound) + 1);

    std::vector<char> rep(bound, 0);
    if (bound > 0) {
      rep[0] = 1;
      const unsigned long sa = pa_red.get_ui(), sb = pb_red.get_ui();
      for (unsigned long s = 1; s < bound; ++s)
        rep[s] = (s >= sa && rep[s - sa]) || (s >= sb && rep[s - sb]);
    }

    budget.charge(static_cast<long>(pa->residues.size() * pb->residues.size()));
    for (const Natural& ra : pa->residues) {
      Natural na = first_point_ge(pa->threshold, pa->period, ra);
      for (const Natural& rb : pb->residues) {
        Natural nb = first_point_ge(pb->threshold, pb->period, rb);
        Natural base = na + nb;
        std::vector<Natural> sporadic;
        for (unsigned long s = 0; s < bound; ++s) {
          if (!rep[s]) continue;
          budget.charge(1);
          sporadic.push_back(base + g * static_cast<long>(s));
        }
        components.push_back(SpikeSet::make(
            std::move(sporadic),
            SpikeSet::Periodic{base + g * static_cast<long>(bound), g, {base % g}}));
      }
    }
  }

  SpikeSet out;
  for (const SpikeSet& c : components) out = set_union(out, c, budget);
  return out;
}

// Elements of s divided by g (g divides every element), restricted to scaled
// values in [1, limit]. Values beyond the limit are skipped; set_plus's tail
// claim absorbs them.
std::vector<unsigned long> scaled_elements_up_to(const SpikeSet& s, const Natural& g,
                                                 unsigned long limit, Budget& budget) {
  std::vector<unsigned long> out;
  for (const Natural& x : s.finite_part()) {
    if (x == 0) continue;
    Natural scaled = x / g;
    if (scaled.fits_ulong_p() && scaled.get_ui() <= limit) {
      budget.charge(1);
      out.push_back(scaled.get_ui());
    }
  }
  if (const auto& per = s.periodic_part()) {
    Natural limit_big = g * Natural(limit);
    for (const Natural& r : per->residues) {
      for (Natural n = first_point_ge(per->threshold, per->period, r); n <= limit_big;
           n += per->period) {
        if (n == 0) continue;
        budget.charge(1);
        out.push_back(Natural(n / g).get_ui());
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpikeSet set_plus(const SpikeSet& a, Budget& budget) {
  if (a.empty()) return a;

  // Zero (the empty word) contributes nothing to a sum.
  const bool has_zero = a.contains(0);
  std::vector<Natural> fin = a.finite_part();
  std::erase(fin, Natural(0));
  std::optional<SpikeSet::Periodic> per = a.periodic_part();
  if (per && per->threshold == 0 && sorted_contains(per->residues, 0))
    per->threshold = 1;
  SpikeSet body = SpikeSet::make(std::move(fin), std::move(per));

  auto with_zero = [&](SpikeSet s) {
    if (!has_zero) return s;
    return set_union(s, SpikeSet::finite({0}), budget);
  };

  if (body.empty()) return a;

  // Single generator: {v}+ = {v, 2v, 3v, ...}.
  if (!body.periodic_part() && body.finite_part().size() == 1) {
    const Natural& v = body.finite_part()[0];
    return with_zero(SpikeSet::make({}, SpikeSet::Periodic{v, v, {0}}));
  }

  // Representatives: the finite elements plus the first periodic point of
  // every residue class. Their gcd, together with the period, divides every
  // element of the set.
  std::vector<Natural> reps = body.finite_part();
  Natural g = 0;
  if (const auto& p = body.periodic_part()) {
    for (const Natural& r : p->residues)
      reps.push_back(first_point_ge(p->threshold, p->period, r));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), p->period.get_mpz_t());
  }
  for (const Natural& x : reps) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());

  // Fast path: a set closed under addition is its own plus. Sufficient test:
  // every pairwise sum of representatives lands in the periodic tail (adding
  // periods then stays inside).
  if (const auto& p = body.periodic_part()) {
    bool closed = true;
    for (const Natural& x : reps) {
      for (const Natural& y : reps) {
        Natural s = x + y;
        if (s < p->threshold || !sorted_contains(p->residues, s % p->period)) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    if (closed) return with_zero(body);
  }

  // General case: scale down by g, run a semigroup-membership DP upward, and
  // stop once min/g consecutive scaled integers are representable: from there
  // on everything is reachable by adding copies of the minimum. Sums that use
  // elements beyond the DP range land beyond the stabilization point, so
  // skipping them is sound.
  Natural min_scaled_big = body.min() / g;
  if (!min_scaled_big.fits_ulong_p() || min_scaled_big.get_ui() > kDpLimit)
    throw PatternTooComplex("plus-closure window too large");
  const unsigned long window = std::max<unsigned long>(1, min_scaled_big.get_ui());

  unsigned long n_limit = std::max<unsigned long>(64, 4 * window);
  if (const auto& p = body.periodic_part()) {
    Natural start = (p->threshold / g) + (p->period / g) * 2 + 2;
    if (start.fits_ulong_p() && start.get_ui() <= kDpLimit)
      n_limit = std::max(n_limit, start.get_ui());
  }

  while (true) {
    if (n_limit > kDpLimit) throw PatternTooComplex("plus-closure DP range exhausted");
    std::vector<unsigned long> elems = scaled_elements_up_to(body, g, n_limit, budget);
    std::vector<char> rep(n_limit + 1, 0);
    for (unsigned long e : elems) rep[e] = 1;
    unsigned long run = 0;
    std::optional<unsigned long> stable_from;
    for (unsigned long n = 1; n <= n_limit; ++n) {
      if (!rep[n]) {
        budget.charge(1);
        for (unsigned long e : elems) {
          if (e >= n) break;
          budget.charge(1);
          if (rep[n - e]) {
            rep[n] = 1;
            break;
          }
        }
      }
      run = rep[n] ? run + 1 : 0;
      if (run >= window) {
        stable_from = n - window + 1;
        break;
      }
    }
    if (!stable_from) {
      n_limit *= 2;
      continue;
    }
    std::vector<Natural> sporadic;
    for (unsigned long n = 1; n < *stable_from; ++n)
      if (rep[n]) sporadic.push_back(g * Natural(n));
    return with_zero(SpikeSet::make(std::move(sporadic),
                                    SpikeSet::Periodic{g * Natural(*stable_from), g, {0}}));
  }
}

}  // namespace

SpikeSet SpikeSet::finite(std::vector<Natural> values) {
  return make(std::move(values), std::nullopt);
}

SpikeSet SpikeSet::make(std::vector<Natural> fin, std::optional<Periodic> per) {
  Budget local;
  Budget& budget = g_active_budget ? *g_active_budget : local;

  sort_dedupe(fin);
  if (per) {
    if (per->period < 1) throw DomainError("periodic part needs period >= 1");
    for (Natural& r : per->residues) r %= per->period;
    sort_dedupe(per->residues);
    if (per->residues.empty()) per.reset();
  }

  if (per) {
    // Absorb finite elements at or above the threshold: covered ones are
    // redundant, uncovered ones force the threshold up past them.
    std::vector<Natural> below;
    std::optional<Natural> max_uncovered;
    for (const Natural& x : fin) {
      if (x < per->threshold) {
        below.push_back(x);
      } else if (!sorted_contains(per->residues, x % per->period)) {
        if (!max_uncovered || x > *max_uncovered) max_uncovered = x;
      }
    }
    if (max_uncovered) {
      Natural new_threshold = *max_uncovered + 1;
      materialize(*per, per->threshold, new_threshold, below, budget);
      for (const Natural& x : fin)
        if (x >= per->threshold && x < new_threshold) below.push_back(x);
      per->threshold = new_threshold;
    }
    fin = std::move(below);
    sort_dedupe(fin);

    // Minimal period, when the period is small enough to factor cheaply.
    if (per->period > 1 && per->period.fits_ulong_p() &&
        per->period.get_ui() <= kMinimizePeriodLimit) {
      unsigned long period = per->period.get_ui();
      for (unsigned long d : ascending_divisors(period)) {
        if (d == period) break;
        bool invariant = true;
        for (const Natural& r : per->residues) {
          if (!sorted_contains(per->residues, (r + d) % per->period)) {
            invariant = false;
            break;
          }
        }
        if (invariant) {
          for (Natural& r : per->residues) r %= d;
          sort_dedupe(per->residues);
          per->period = d;
          break;
        }
      }
    }

    // Minimal threshold: walk interesting points downward. Every pass either
    // consumes a finite element or stops, so this is O(|finite| * |residues|).
    while (per->threshold > 0) {
      std::optional<Natural> q;
      if (!fin.empty()) q = fin.back();
      for (const Natural& r : per->residues) {
        auto candidate = last_point_lt(per->threshold, per->period, r);
        if (candidate && (!q || *candidate > *q)) q = candidate;
      }
      if (!q) {
        per->threshold = 0;
        break;
      }
      bool in_finite = !fin.empty() && fin.back() == *q;
      bool is_periodic = sorted_contains(per->residues, *q % per->period);
      if (is_periodic && in_finite) {
        fin.pop_back();
        per->threshold = *q;
        continue;
      }
      per->threshold = *q + 1;
      break;
    }
  }

  SpikeSet s;
  s.finite_ = std::move(fin);
  s.periodic_ = std::move(per);
  return s;
}

bool SpikeSet::contains(const Natural& n) const {
  if (periodic_ && n >= periodic_->threshold)
    return sorted_contains(periodic_->residues, n % periodic_->period);
  return sorted_contains(finite_, n);
}

Natural SpikeSet::min() const {
  if (empty()) throw DomainError("min of empty spike set");
  std::optional<Natural> best;
  if (!finite_.empty()) best = finite_.front();
  if (periodic_) {
    for (const Natural& r : periodic_->residues) {
      Natural candidate = first_point_ge(periodic_->threshold, periodic_->period, r);
      if (!best || candidate < *best) best = candidate;
    }
  }
  return *best;
}

SpikeSet compile_pattern(const SpikePattern& p) {
  Budget budget;
  BudgetScope scope(&budget);
  auto go = [&budget](auto&& self, const SpikePattern& node) -> SpikeSet {
    switch (node.kind()) {
      case SpikePattern::Kind::Lambda:
        return SpikeSet::finite({0});
      case SpikePattern::Kind::Atom:
        return SpikeSet::finite({node.atom_count()});
      case SpikePattern::Kind::Concat: {
        SpikeSet acc = self(self, node.children()[0]);
        for (size_t i = 1; i < node.children().size(); ++i)
          acc = set_sum(acc, self(self, node.children()[i]), budget);
        return acc;
      }
      case SpikePattern::Kind::Union: {
        SpikeSet acc = self(self, node.children()[0]);
        for (size_t i = 1; i < node.children().size(); ++i)
          acc = set_union(acc, self(self, node.children()[i]), budget);
        return acc;
      }
      case SpikePattern::Kind::Plus:
        return set_plus(self(self, node.children()[0]), budget);
    }
    throw DomainError("unreachable pattern kind");
  };
  return go(go, p);
}

bool pattern_matches(const SpikeSet& s, const Natural& n) { return s.contains(n); }

}  // namespace snpc
