#include "snpc/numtheory.hpp"

#include <set>

#include "doctest.h"
#include "snpc/selftest.hpp"

using snpc::DomainError;
using snpc::Natural;
namespace num = snpc::num;

namespace {

// Independent oracle: repeated multiplication.
Natural slow_pow(const Natural& base, unsigned long exp, const Natural& modulus) {
  Natural r = 1 % modulus;
  for (unsigned long i = 0; i < exp; ++i) r = (r * base) % modulus;
  return r;
}

}  // namespace

TEST_CASE("mod_pow against repeated multiplication") {
  CHECK(num::mod_pow(5, 6, 23) == slow_pow(5, 6, 23));
  CHECK(num::mod_pow(5, 6, 23) == 8);
  CHECK(num::mod_pow(10, 6, 23) == 6);

  num::Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    Natural base = num::rand_below(1000, rng);
    unsigned long exp = num::rand_below(200, rng).get_ui();
    Natural modulus = num::rand_below(997, rng) + 2;
    CHECK(num::mod_pow(base, exp, modulus) == slow_pow(base, exp, modulus));
  }
}

TEST_CASE("mod_pow edge cases") {
  CHECK(num::mod_pow(7, 0, 23) == 1);
  CHECK(num::mod_pow(0, 0, 5) == 1);
  CHECK(num::mod_pow(12345, 0, 2) == 1);
  CHECK(num::mod_pow(25, 1, 23) == 2);
  CHECK_THROWS_AS(num::mod_pow(2, 3, 1), DomainError);
  CHECK_THROWS_AS(num::mod_pow(2, 3, 0), DomainError);
}

TEST_CASE("mod_pow exponent additivity at a 64-bit prime") {
  Natural p("11881870593822888767");
  num::Rng rng(42);
  for (int i = 0; i < 25; ++i) {
    Natural a = num::rand_below(p, rng);
    Natural b = num::rand_below(p, rng);
    Natural lhs = num::mod_pow(5, a + b, p);
    Natural rhs = (num::mod_pow(5, a, p) * num::mod_pow(5, b, p)) % p;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("mod_inv") {
  CHECK(num::mod_inv(6, 23) == 4);
  CHECK(num::mod_inv(12, 23) == 2);
  CHECK(num::mod_inv(1, 23) == 1);
  CHECK(num::mod_inv(1, 2) == 1);
  CHECK_THROWS_AS(num::mod_inv(6, 24), num::NotInvertible);
  CHECK_THROWS_AS(num::mod_inv(0, 7), num::NotInvertible);
  CHECK_THROWS_AS(num::mod_inv(30, 5), num::NotInvertible);

  num::Rng rng(43);
  Natural p("11881870593822888767");
  for (int i = 0; i < 50; ++i) {
    Natural a = num::rand_below(p - 1, rng) + 1;
    CHECK((a * num::mod_inv(a, p)) % p == 1);
  }
}

TEST_CASE("miller-rabin agrees with trial division on a prefix") {
  num::Rng rng(44);
  for (unsigned long n = 0; n < 20000; ++n) {
    CHECK(num::is_probable_prime(n, 40, rng) ==
          snpc::selftest::trial_division_is_prime(n));
  }
}

TEST_CASE("miller-rabin rejects carmichael numbers") {
  num::Rng rng(45);
  for (unsigned long carmichael : {561UL, 1105UL, 1729UL, 2465UL, 41041UL}) {
    CHECK_FALSE(num::is_probable_prime(carmichael, 40, rng));
  }
  CHECK(num::is_probable_prime(2, 40, rng));
  CHECK(num::is_probable_prime(Natural("11881870593822888767"), 40, rng));
}

TEST_CASE("rand_below basics") {
  num::Rng rng(46);
  for (int i = 0; i < 10; ++i) CHECK(num::rand_below(1, rng) == 0);

  num::Rng a(47), b(47);
  for (int i = 0; i < 100; ++i)
    CHECK(num::rand_below(1000000, a) == num::rand_below(1000000, b));

  CHECK_THROWS_AS(num::rand_below(0, rng), DomainError);

  // Draws stay inside the bound, including awkward ones.
  for (const char* bound_text : {"2", "3", "16", "17", "18446744073709551617"}) {
    Natural bound(bound_text);
    for (int i = 0; i < 200; ++i) {
      Natural draw = num::rand_below(bound, rng);
      CHECK(draw < bound);
    }
  }
}

TEST_CASE("rand_below uniformity chi-square") {
  num::Rng rng(48);
  const int kDraws = 10000;
  const int kBins = 16;
  int bins[kBins] = {0};
  for (int i = 0; i < kDraws; ++i)
    bins[num::rand_below(kBins, rng).get_ui()] += 1;
  double expected = static_cast<double>(kDraws) / kBins;
  double chi2 = 0;
  for (int count : bins) {
    double d = count - expected;
    chi2 += d * d / expected;
  }
  // 15 degrees of freedom, significance 0.001.
  CHECK(chi2 < 37.697);
}

TEST_CASE("gen_group produces certified safe-prime groups") {
  for (unsigned bits : {8u, 12u, 24u, 32u}) {
    num::Rng rng(49 + bits);
    num::PrimeGroup grp = num::gen_group(bits, rng);
    CHECK(mpz_sizeinbase(grp.p.get_mpz_t(), 2) == bits);
    CHECK(mpz_odd_p(grp.p.get_mpz_t()));
    Natural q = (grp.p - 1) / 2;
    num::Rng check(1);
    CHECK(num::is_probable_prime(grp.p, 40, check));
    CHECK(num::is_probable_prime(q, 40, check));
    CHECK(grp.g >= 2);
    CHECK(grp.g <= grp.p - 2);
    CHECK(num::mod_pow(grp.g, 2, grp.p) != 1);
    CHECK(num::mod_pow(grp.g, q, grp.p) != 1);
  }
  num::Rng rng(50);
  CHECK_THROWS_AS(num::gen_group(7, rng), DomainError);
}

TEST_CASE("gen_group is deterministic under a fixed seed") {
  num::Rng a(51), b(51);
  num::PrimeGroup ga = num::gen_group(24, a);
  num::PrimeGroup gb = num::gen_group(24, b);
  CHECK(ga.p == gb.p);
  CHECK(ga.g == gb.g);
}
