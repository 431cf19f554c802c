#include "snpc/common.hpp"

namespace snpc {

std::string to_hex(const Natural& n) {
  // mpz emits lowercase minimal digits for base 16.
  return n.get_str(16);
}

Natural from_hex(const std::string& text) {
  if (text.empty()) throw DomainError("hex value is empty");
  if (text.size() > 1 && text[0] == '0')
    throw DomainError("hex value has a leading zero: " + text);
  for (char c : text) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) throw DomainError(std::string("bad hex digit '") + c + "' in: " + text);
  }
  Natural n;
  mpz_set_str(n.get_mpz_t(), text.c_str(), 16);
  return n;
}

std::string to_dec(const Natural& n) { return n.get_str(10); }

Natural from_dec(const std::string& text) {
  if (text.empty()) throw DomainError("decimal value is empty");
  if (text.size() > 1 && text[0] == '0')
    throw DomainError("decimal value has a leading zero: " + text);
  for (char c : text) {
    if (c < '0' || c > '9')
      throw DomainError(std::string("bad decimal digit '") + c + "' in: " + text);
  }
  Natural n;
  mpz_set_str(n.get_mpz_t(), text.c_str(), 10);
  return n;
}

unsigned long to_ulong(const Natural& n) {
  if (!n.fits_ulong_p()) throw DomainError("value too large: " + to_dec(n));
  return n.get_ui();
}

}  // namespace snpc
