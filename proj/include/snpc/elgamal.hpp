#pragma once

#include <string>

#include "snpc/common.hpp"
#include "snpc/numtheory.hpp"

namespace snpc::elg {

struct MessageOutOfRange : Error {
  using Error::Error;
};
struct RandomnessOutOfRange : Error {
  using Error::Error;
};
struct ScalarOutOfRange : Error {
  using Error::Error;
};
struct RandomnessMismatch : Error {
  using Error::Error;
};

// Multiplicative group modulo a safe prime. The full group Z_p* is used, so
// every message in [1, p-1] is encryptable; exponents live mod q = p - 1.
struct GroupParams {
  Natural p;
  Natural g;
  Natural q;  // p - 1
};

// Validates primality of p (probable, 40 rounds) and the generator
// certificates g^2 != 1, g^((p-1)/2) != 1 (mod p). Throws DomainError.
GroupParams make_params(const Natural& p, const Natural& g);

// gen_group + make_params.
GroupParams generate_params(unsigned bits, num::Rng& rng);

struct KeyPair {
  Natural x;  // secret exponent in [1, q-1]
  Natural h;  // g^x mod p
};

struct Ciphertext {
  Natural c1;
  Natural c2;
  bool operator==(const Ciphertext&) const = default;
};

KeyPair keygen(const GroupParams& params, num::Rng& rng);

// (g^y mod p, m*h^y mod p). Requires 1 <= m <= p-1 and 1 <= y <= q-1.
Ciphertext encrypt_with(const GroupParams& params, const Natural& h, const Natural& m,
                        const Natural& y);

struct Encrypted {
  Ciphertext ct;
  Natural y;  // the randomness used; callers may reuse it for composition
};

Encrypted encrypt(const GroupParams& params, const Natural& h, const Natural& m,
                  num::Rng& rng);

Natural decrypt(const GroupParams& params, const Natural& x, const Ciphertext& c);

// Ciphertext-ciphertext multiplication; decrypts to m*m' mod p.
Ciphertext hom_mul(const GroupParams& params, const Ciphertext& a, const Ciphertext& b);

// Ciphertext-constant scaling; decrypts to m*k mod p. Requires 1 <= k <= p-1.
Ciphertext hom_scale(const GroupParams& params, const Ciphertext& c, const Natural& k);

// Shared-randomness addition: requires a.c1 == b.c1 (same y); decrypts to
// (m+m') mod p. A sum hitting exactly p therefore decrypts to 0, which lies
// outside the plaintext space; callers needing exact naturals keep sums
// below p.
Ciphertext hom_add(const GroupParams& params, const Ciphertext& a, const Ciphertext& b);

// Key and parameter files: UTF-8, one name=value per line, lowercase hex
// values without leading zeros. Params file carries p= and g=; public-key
// file h=; secret-key file x=.
void write_params_file(const std::string& path, const GroupParams& params);
GroupParams read_params_file(const std::string& path);
void write_public_key_file(const std::string& path, const Natural& h);
Natural read_public_key_file(const std::string& path);
void write_secret_key_file(const std::string& path, const Natural& x);
Natural read_secret_key_file(const std::string& path);

}  // namespace snpc::elg
