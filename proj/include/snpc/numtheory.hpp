#pragma once

#include <cstdint>
#include <random>

#include "snpc/common.hpp"

namespace snpc::num {

struct NotInvertible : Error {
  using Error::Error;
};

struct GenerationFailed : Error {
  using Error::Error;
};

// Deterministic seedable PRNG. Every random choice in the library flows
// through an explicitly passed Rng; there is no hidden global entropy.
// Same seed, same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Seeded from the operating system; for production key material.
  static Rng from_entropy();

  std::uint64_t next_word() { return gen_(); }

  // Independent child stream, for forking work across threads or tests.
  Rng fork() { return Rng(next_word() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 gen_;
};

inline constexpr unsigned kMillerRabinRounds = 40;

// base^exp mod modulus by square-and-multiply. modulus >= 2.
Natural mod_pow(const Natural& base, const Natural& exp, const Natural& modulus);

// Inverse of a modulo modulus via extended Euclid.
// Throws NotInvertible when gcd(a mod modulus, modulus) != 1.
Natural mod_inv(const Natural& a, const Natural& modulus);

// Small-prime trial division followed by `rounds` Miller-Rabin rounds with
// random bases. false is certain compositeness; true is prime with error
// probability at most 4^-rounds.
bool is_probable_prime(const Natural& n, unsigned rounds, Rng& rng);

// Uniform in [0, bound) by rejection sampling on fixed-width draws.
Natural rand_below(const Natural& bound, Rng& rng);

struct PrimeGroup {
  Natural p;  // safe prime, exactly `bits` bits
  Natural g;  // generator of the full multiplicative group mod p
};

// Searches random candidates for a safe prime p = 2q'+1 of the requested
// bit length and certifies a generator by g^2 != 1 and g^q' != 1 (mod p).
// Throws GenerationFailed after a bounded number of candidates.
PrimeGroup gen_group(unsigned bits, Rng& rng);

}  // namespace snpc::num
