#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace snpc {

// Arbitrary-precision natural number. GMP's mpz is signed; every value that
// flows through this library is kept >= 0.
using Natural = mpz_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

// Lowercase hex without leading zeros; zero encodes as "0".
std::string to_hex(const Natural& n);

// Strict inverse of to_hex: rejects empty input, uppercase digits, prefixes
// and leading zeros. Throws DomainError on malformed input.
Natural from_hex(const std::string& text);

std::string to_dec(const Natural& n);

// Strict decimal: digits only, no leading zeros except "0" itself.
Natural from_dec(const std::string& text);

// Throws DomainError when the value does not fit.
unsigned long to_ulong(const Natural& n);

}  // namespace snpc
