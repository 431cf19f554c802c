#include "snpc/pattern.hpp"

#include "doctest.h"
#include "snpc/selftest.hpp"

using namespace snpc;

namespace {

SpikePattern a_plus() { return SpikePattern::plus(SpikePattern::atom(1)); }

}  // namespace

TEST_CASE("compile a+") {
  SpikeSet s = compile_pattern(a_plus());
  CHECK(s.finite_part().empty());
  REQUIRE(s.periodic_part().has_value());
  CHECK(s.periodic_part()->threshold == 1);
  CHECK(s.periodic_part()->period == 1);
  CHECK(s.periodic_part()->residues == std::vector<Natural>{0});
  CHECK(pattern_matches(s, 7));
  CHECK(pattern_matches(s, 1));
  CHECK_FALSE(pattern_matches(s, 0));
}

TEST_CASE("compile a^4") {
  SpikeSet s = compile_pattern(SpikePattern::atom(4));
  CHECK(s.finite_part() == std::vector<Natural>{4});
  CHECK_FALSE(s.periodic_part().has_value());
  CHECK_FALSE(pattern_matches(s, 3));
  CHECK(pattern_matches(s, 4));
}

TEST_CASE("compile a^2 (a^3)+") {
  std::vector<SpikePattern> parts;
  parts.push_back(SpikePattern::atom(2));
  parts.push_back(SpikePattern::plus(SpikePattern::atom(3)));
  SpikeSet s = compile_pattern(SpikePattern::concat(std::move(parts)));

  // {5, 8, 11, ...}: period 3, residue 2; the minimal threshold is 3 (2 is
  // the first residue point excluded from the set).
  CHECK(s.finite_part().empty());
  REQUIRE(s.periodic_part().has_value());
  CHECK(s.periodic_part()->threshold == 3);
  CHECK(s.periodic_part()->period == 3);
  CHECK(s.periodic_part()->residues == std::vector<Natural>{2});
  for (unsigned long n = 0; n <= 60; ++n)
    CHECK(pattern_matches(s, n) == (n >= 5 && (n - 5) % 3 == 0));
  CHECK(pattern_matches(s, 14));
}

TEST_CASE("lambda and unions") {
  CHECK(compile_pattern(SpikePattern::lambda()).contains(0));
  CHECK(compile_pattern(SpikePattern::lambda()).finite_part() ==
        std::vector<Natural>{0});

  std::vector<SpikePattern> alts;
  alts.push_back(SpikePattern::atom(2));
  alts.push_back(SpikePattern::atom(4));
  alts.push_back(SpikePattern::atom(4));
  SpikeSet s = compile_pattern(SpikePattern::alt(std::move(alts)));
  CHECK(s.finite_part() == std::vector<Natural>{2, 4});

  // a | a+ collapses to {n >= 1}.
  std::vector<SpikePattern> alts2;
  alts2.push_back(SpikePattern::atom(1));
  alts2.push_back(a_plus());
  SpikeSet t = compile_pattern(SpikePattern::alt(std::move(alts2)));
  CHECK(t == compile_pattern(a_plus()));
}

TEST_CASE("pattern tree invariants") {
  CHECK_THROWS_AS(SpikePattern::atom(0), DomainError);
  CHECK_THROWS_AS(SpikePattern::concat({}), DomainError);
  CHECK_THROWS_AS(SpikePattern::alt({SpikePattern::atom(1)}), DomainError);
}

TEST_CASE("canonical form invariants on random patterns") {
  num::Rng rng(4242);
  for (int i = 0; i < 100; ++i) {
    SpikePattern p = snpc::selftest::random_pattern(rng, 4);
    SpikeSet s = compile_pattern(p);
    const auto& fin = s.finite_part();
    for (size_t j = 1; j < fin.size(); ++j) CHECK(fin[j - 1] < fin[j]);
    if (s.periodic_part()) {
      const auto& per = *s.periodic_part();
      CHECK(!per.residues.empty());
      CHECK(per.period >= 1);
      for (const Natural& r : per.residues) CHECK(r < per.period);
      for (const Natural& f : fin) CHECK(f < per.threshold);
    }
  }
}

TEST_CASE("compiled sets match the enumeration oracle") {
  num::Rng rng(777);
  for (int i = 0; i < 60; ++i) {
    SpikePattern p = snpc::selftest::random_pattern(rng, 4);
    SpikeSet s = compile_pattern(p);
    auto oracle = snpc::selftest::enumerate_lengths(p, 60);
    for (unsigned long n = 0; n <= 60; ++n)
      CHECK(s.contains(n) == (oracle.count(n) > 0));
  }
}

TEST_CASE("exactness at cryptographic magnitudes") {
  Natural huge = Natural(1) << 200;

  SpikeSet single = compile_pattern(SpikePattern::atom(huge));
  CHECK(single.contains(huge));
  CHECK_FALSE(single.contains(huge - 1));

  SpikeSet multiples = compile_pattern(SpikePattern::plus(SpikePattern::atom(huge)));
  CHECK(multiples.contains(huge));
  CHECK(multiples.contains(huge * 3));
  CHECK_FALSE(multiples.contains(huge * 3 + 1));
  CHECK_FALSE(multiples.contains(1));

  std::vector<SpikePattern> parts;
  parts.push_back(SpikePattern::atom(huge));
  parts.push_back(SpikePattern::atom(2));
  SpikeSet shifted = compile_pattern(SpikePattern::concat(std::move(parts)));
  CHECK(shifted.contains(huge + 2));
  CHECK_FALSE(shifted.contains(huge));
}

TEST_CASE("work budget guards pathological mixes") {
  std::vector<SpikePattern> alts;
  alts.push_back(SpikePattern::plus(SpikePattern::atom(Natural(1) << 128)));
  alts.push_back(SpikePattern::plus(SpikePattern::atom((Natural(1) << 128) + 1)));
  SpikePattern p = SpikePattern::alt(std::move(alts));
  CHECK_THROWS_AS(compile_pattern(p), PatternTooComplex);
}

TEST_CASE("min of a compiled set") {
  CHECK(compile_pattern(a_plus()).min() == 1);
  CHECK(compile_pattern(SpikePattern::atom(4)).min() == 4);
  std::vector<SpikePattern> alts;
  alts.push_back(SpikePattern::atom(7));
  alts.push_back(SpikePattern::plus(SpikePattern::atom(3)));
  CHECK(compile_pattern(SpikePattern::alt(std::move(alts))).min() == 3);
  CHECK_THROWS_AS(SpikeSet().min(), DomainError);
}
