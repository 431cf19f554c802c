#include "snpc/elgamal.hpp"

#include <fstream>
#include <map>
#include <vector>

namespace snpc::elg {
namespace {

// Validation draws Miller-Rabin bases from a fixed-seed stream so that
// loading the same file twice is byte-for-byte reproducible.
constexpr std::uint64_t kValidationSeed = 0x70617261'6d733031ULL;

void check_message_range(const GroupParams& params, const Natural& m) {
  if (m < 1 || m >= params.p)
    throw MessageOutOfRange("message must lie in [1, p-1], got " + to_dec(m));
}

void check_randomness_range(const GroupParams& params, const Natural& y) {
  if (y < 1 || y >= params.q)
    throw RandomnessOutOfRange("randomness must lie in [1, q-1], got " + to_dec(y));
}

std::map<std::string, Natural> read_kv_file(const std::string& path,
                                            const std::vector<std::string>& keys) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::map<std::string, Natural> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError(path + ": malformed line: " + line);
    std::string key = line.substr(0, eq);
    out[key] = from_hex(line.substr(eq + 1));
  }
  for (const auto& key : keys)
    if (!out.count(key)) throw DomainError(path + ": missing " + key + "=");
  return out;
}

void write_kv_file(const std::string& path,
                   const std::vector<std::pair<std::string, Natural>>& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path);
  for (const auto& [key, value] : entries) out << key << "=" << to_hex(value) << "\n";
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace

GroupParams make_params(const Natural& p, const Natural& g) {
  if (p < 5) throw DomainError("group modulus too small: " + to_dec(p));
  num::Rng rng(kValidationSeed);
  if (!num::is_probable_prime(p, num::kMillerRabinRounds, rng))
    throw DomainError("group modulus is not prime: " + to_dec(p));
  if (g < 2 || g > p - 2) throw DomainError("generator out of range: " + to_dec(g));
  if (num::mod_pow(g, 2, p) == 1 || num::mod_pow(g, (p - 1) / 2, p) == 1)
    throw DomainError("generator certificate failed for g=" + to_dec(g));
  return GroupParams{p, g, p - 1};
}

GroupParams generate_params(unsigned bits, num::Rng& rng) {
  num::PrimeGroup grp = num::gen_group(bits, rng);
  return make_params(grp.p, grp.g);
}

KeyPair keygen(const GroupParams& params, num::Rng& rng) {
  Natural x = num::rand_below(params.q - 1, rng) + 1;  // [1, q-1]
  return KeyPair{x, num::mod_pow(params.g, x, params.p)};
}

Ciphertext encrypt_with(const GroupParams& params, const Natural& h, const Natural& m,
                        const Natural& y) {
  check_message_range(params, m);
  check_randomness_range(params, y);
  Natural s = num::mod_pow(h, y, params.p);
  return Ciphertext{num::mod_pow(params.g, y, params.p), (m * s) % params.p};
}

Encrypted encrypt(const GroupParams& params, const Natural& h, const Natural& m,
                  num::Rng& rng) {
  Natural y = num::rand_below(params.q - 1, rng) + 1;
  return Encrypted{encrypt_with(params, h, m, y), y};
}

Natural decrypt(const GroupParams& params, const Natural& x, const Ciphertext& c) {
  Natural s = num::mod_pow(c.c1, x, params.p);
  return (c.c2 * num::mod_inv(s, params.p)) % params.p;
}

Ciphertext hom_mul(const GroupParams& params, const Ciphertext& a, const Ciphertext& b) {
  return Ciphertext{(a.c1 * b.c1) % params.p, (a.c2 * b.c2) % params.p};
}

Ciphertext hom_scale(const GroupParams& params, const Ciphertext& c, const Natural& k) {
  if (k < 1 || k >= params.p)
    throw ScalarOutOfRange("scalar must lie in [1, p-1], got " + to_dec(k));
  return Ciphertext{c.c1, (c.c2 * k) % params.p};
}

Ciphertext hom_add(const GroupParams& params, const Ciphertext& a, const Ciphertext& b) {
  if (a.c1 != b.c1)
    throw RandomnessMismatch("hom_add requires shared randomness (equal c1)");
  return Ciphertext{a.c1, (a.c2 + b.c2) % params.p};
}

void write_params_file(const std::string& path, const GroupParams& params) {
  write_kv_file(path, {{"p", params.p}, {"g", params.g}});
}

GroupParams read_params_file(const std::string& path) {
  auto kv = read_kv_file(path, {"p", "g"});
  return make_params(kv.at("p"), kv.at("g"));
}

void write_public_key_file(const std::string& path, const Natural& h) {
  write_kv_file(path, {{"h", h}});
}

Natural read_public_key_file(const std::string& path) {
  return read_kv_file(path, {"h"}).at("h");
}

void write_secret_key_file(const std::string& path, const Natural& x) {
  write_kv_file(path, {{"x", x}});
}

Natural read_secret_key_file(const std::string& path) {
  return read_kv_file(path, {"x"}).at("x");
}

}  // namespace snpc::elg
