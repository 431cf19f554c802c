#include "snpc/protocol.hpp"

namespace snpc::proto {

Prepared client_prepare(const elg::GroupParams& params, const LinParams& plain,
                        Mode mode, num::Rng& rng) {
  if (plain.t1 * plain.k + plain.t2 >= params.p)
    throw PlaintextTooLarge("t1*k + t2 must stay below p for exact recovery");

  elg::KeyPair keys = elg::keygen(params, rng);

  Natural y1, y2, y12;
  do {
    y1 = num::rand_below(params.q - 1, rng) + 1;
    y2 = num::rand_below(params.q - 1, rng) + 1;
    y12 = (y1 + y2) % params.q;
  } while (y12 == 0);

  elg::Ciphertext ct1 = elg::encrypt_with(params, keys.h, plain.t1, y1);
  elg::Ciphertext ck = elg::encrypt_with(params, keys.h, plain.k, y2);
  elg::Ciphertext ct2 = elg::encrypt_with(params, keys.h, plain.t2, y12);

  // g^(y1+y2) = g^y1 * g^y2; anything else is an arithmetic bug.
  if (ct2.c1 != (ct1.c1 * ck.c1) % params.p)
    throw Error("session consistency check failed");

  Prepared out;
  out.session = ClientSession{params, keys,   y1,     y2,    plain,
                              ct1.c1, ct2.c1, ck.c1};
  out.request = ComputeRequest{mode, ct1.c2, ct2.c2, ck.c2};
  return out;
}

ComputeResponse server_compute(const ComputeRequest& req, const Budgets& budgets) {
  if (req.t1c < 1 || req.t2c < 1 || req.kc < 1)
    throw BadRequest("request components must be nonzero");
  LinParams params = LinParams::make(req.t1c, req.t2c, req.kc);

  ComputeResponse resp;
  switch (req.mode) {
    case Mode::Closed:
      resp.c2 = linfun_oracle(params);
      resp.ticks = 0;
      resp.events = 0;
      return resp;
    case Mode::Literal: {
      SpikeTrace trace = run(build_pi_add(params), budgets.literal_steps);
      if (!trace.halted)
        throw OverBudget("literal simulation exceeded " +
                         to_dec(budgets.literal_steps) + " steps");
      if (trace.emissions.size() != 2)
        throw TraceShape("expected 2 emissions, got " +
                         std::to_string(trace.emissions.size()));
      resp.c2 = trace.emissions[1] - trace.emissions[0];
      resp.ticks = trace.final_clock;
      resp.events = trace.steps_executed;
      return resp;
    }
    case Mode::Events: {
      SpikeTrace trace = run_events(build_pi_add(params), budgets.events);
      if (!trace.halted)
        throw OverBudget("event simulation exceeded " + to_dec(budgets.events) +
                         " events");
      if (trace.emissions.size() != 2)
        throw TraceShape("expected 2 emissions, got " +
                         std::to_string(trace.emissions.size()));
      resp.c2 = trace.emissions[1] - trace.emissions[0];
      resp.ticks = trace.final_clock;
      resp.events = trace.steps_executed;
      return resp;
    }
  }
  throw BadRequest("unknown mode");
}

Natural client_finish(const ClientSession& session, const ComputeResponse& resp) {
  const Natural& p = session.params.p;
  Natural c1 = (session.c1_t1 * session.c1_k) % p;
  Natural c2 = resp.c2 % p;
  if (c2 == 0)
    throw DecryptionDegenerate("server result is divisible by p; no plaintext");
  return elg::decrypt(session.params, session.keys.x, elg::Ciphertext{c1, c2});
}

}  // namespace snpc::proto
