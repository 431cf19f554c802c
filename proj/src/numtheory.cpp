#include "snpc/numtheory.hpp"

#include <array>
#include <vector>

namespace snpc::num {
namespace {

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    constexpr unsigned long kLimit = 1000;
    std::vector<bool> sieve(kLimit, true);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i < kLimit; ++i) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j < kLimit; j += i) sieve[j] = false;
    }
    return out;
  }();
  return primes;
}

}  // namespace

Rng Rng::from_entropy() {
  std::random_device rd;
  std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return Rng(seed);
}

Natural mod_pow(const Natural& base, const Natural& exp, const Natural& modulus) {
  if (modulus < 2) throw DomainError("mod_pow: modulus must be >= 2");
  Natural result = 1 % modulus;
  Natural b = base % modulus;
  const size_t bits = exp == 0 ? 0 : mpz_sizeinbase(exp.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = (result * result) % modulus;
    if (mpz_tstbit(exp.get_mpz_t(), i)) result = (result * b) % modulus;
  }
  return result;
}

Natural mod_inv(const Natural& a, const Natural& modulus) {
  if (modulus < 2) throw DomainError("mod_inv: modulus must be >= 2");
  // Extended Euclid on (a mod m, m); the Bezout coefficient of the first
  // argument is the inverse when the gcd is 1.
  Natural r0 = a % modulus, r1 = modulus;
  Natural t0 = 1, t1 = 0;
  while (r1 != 0) {
    Natural quotient = r0 / r1;
    Natural r2 = r0 - quotient * r1;
    r0 = r1;
    r1 = r2;
    Natural t2 = t0 - quotient * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1)
    throw NotInvertible("mod_inv: gcd(" + to_dec(a % modulus) + ", " + to_dec(modulus) +
                        ") = " + to_dec(r0));
  Natural inv = t0 % modulus;
  if (inv < 0) inv += modulus;
  return inv;
}

bool is_probable_prime(const Natural& n, unsigned rounds, Rng& rng) {
  if (n < 2) return false;
  for (unsigned long p : small_primes()) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // n has no factor < 1000 and exceeds every small prime.
  Natural d = n - 1;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  const Natural n_minus_1 = n - 1;
  for (unsigned round = 0; round < rounds; ++round) {
    Natural a = rand_below(n - 3, rng) + 2;  // [2, n-2]
    Natural x = mod_pow(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = (x * x) % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Natural rand_below(const Natural& bound, Rng& rng) {
  if (bound < 1) throw DomainError("rand_below: bound must be >= 1");
  if (bound == 1) return 0;
  // Draw uniformly in [0, 2^width) with 2^width the smallest power of two
  // covering bound-1, and reject values >= bound.
  const size_t width = mpz_sizeinbase(Natural(bound - 1).get_mpz_t(), 2);
  const size_t words = (width + 63) / 64;
  const size_t top_bits = width - (words - 1) * 64;
  const std::uint64_t top_mask =
      top_bits == 64 ? ~0ULL : ((std::uint64_t{1} << top_bits) - 1);
  while (true) {
    Natural draw = 0;
    for (size_t w = 0; w < words; ++w) {
      std::uint64_t word = rng.next_word();
      if (w == 0) word &= top_mask;
      draw <<= 64;
      draw += Natural(static_cast<unsigned long>(word));
    }
    if (draw < bound) return draw;
  }
}

PrimeGroup gen_group(unsigned bits, Rng& rng) {
  if (bits < 8) throw DomainError("gen_group: bits must be >= 8");
  const unsigned kMaxAttempts = 200000;
  for (unsigned attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // q' random of exactly bits-1 bits, odd; then p = 2q'+1 has exactly
    // `bits` bits.
    Natural half = Natural(1) << (bits - 2);
    Natural q = half + rand_below(half, rng);
    mpz_setbit(q.get_mpz_t(), 0);
    if (!is_probable_prime(q, kMillerRabinRounds, rng)) continue;
    Natural p = 2 * q + 1;
    if (!is_probable_prime(p, kMillerRabinRounds, rng)) continue;
    for (Natural g = 2; g <= p - 2; ++g) {
      if (mod_pow(g, 2, p) == 1) continue;
      if (mod_pow(g, q, p) == 1) continue;
      return PrimeGroup{p, g};
    }
  }
  throw GenerationFailed("gen_group: no safe prime found at " + std::to_string(bits) +
                         " bits after bounded search");
}

}  // namespace snpc::num
