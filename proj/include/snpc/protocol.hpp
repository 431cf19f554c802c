#pragma once

#include "snpc/elgamal.hpp"
#include "snpc/linfun.hpp"
#include "snpc/wire.hpp"

namespace snpc::proto {

struct PlaintextTooLarge : Error {
  using Error::Error;
};
struct BadRequest : Error {
  using Error::Error;
};
struct DecryptionDegenerate : Error {
  using Error::Error;
};

// Everything the client must retain between sending a request and decoding
// the response: key material, the two randomness values and the ciphertext
// first components that never leave the client.
struct ClientSession {
  elg::GroupParams params;
  elg::KeyPair keys;
  Natural y1;
  Natural y2;
  LinParams plain;
  Natural c1_t1;
  Natural c1_t2;  // retained for consistency checks; equals c1_t1*c1_k mod p
  Natural c1_k;
};

struct Prepared {
  ClientSession session;
  ComputeRequest request;
};

// Protocol steps 1-3: generate a key pair, encrypt t1 under y1, k under y2
// and t2 under (y1+y2) mod q (resampling while the sum vanishes), store the
// first components and emit the request carrying only second components.
// Throws PlaintextTooLarge when t1*k + t2 >= p, where decryption would wrap.
Prepared client_prepare(const elg::GroupParams& params, const LinParams& plain,
                        Mode mode, num::Rng& rng);

struct Budgets {
  Natural literal_steps = Natural(1) << 21;
  Natural events = Natural(1) << 20;
};

// Protocol steps 4-5: run the linear-function system on the ciphertext
// second components (simulated in literal/events mode, closed form
// otherwise) and return the unreduced natural t1c*kc + t2c. The server
// cannot check plaintext ranges and never errors on them.
ComputeResponse server_compute(const ComputeRequest& req, const Budgets& budgets);

// Protocol steps 6-7: recompose c1 = c1_t1 * c1_k mod p, reduce the server's
// result mod p and decrypt. Equals t1*k + t2 by the homomorphic identities
// whenever client_prepare's range precondition held.
Natural client_finish(const ClientSession& session, const ComputeResponse& resp);

}  // namespace snpc::proto
