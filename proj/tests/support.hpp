#pragma once

#include "snpc/elgamal.hpp"

namespace snpc_tests {

// Frozen safe-prime groups (re-certified on construction).
inline snpc::elg::GroupParams params23() { return snpc::elg::make_params(23, 5); }

inline snpc::elg::GroupParams params64() {
  return snpc::elg::make_params(snpc::Natural("11881870593822888767"), 5);
}

inline snpc::elg::GroupParams params32() {
  return snpc::elg::make_params(snpc::Natural("2418774923"), 2);
}

inline snpc::elg::GroupParams params1019() {
  return snpc::elg::make_params(1019, 2);
}

}  // namespace snpc_tests
