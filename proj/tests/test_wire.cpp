#include "snpc/wire.hpp"

#include "doctest.h"
#include "snpc/numtheory.hpp"

using namespace snpc;
using namespace snpc::proto;

namespace {

ComputeRequest decode_req_ok(const std::string& line) {
  auto result = decode_request(line);
  REQUIRE(std::holds_alternative<ComputeRequest>(result));
  return std::get<ComputeRequest>(result);
}

WireError decode_req_err(const std::string& line) {
  auto result = decode_request(line);
  REQUIRE(std::holds_alternative<WireError>(result));
  return std::get<WireError>(result);
}

}  // namespace

TEST_CASE("request golden encoding") {
  ComputeRequest req{Mode::Closed, 3, 2, 4};
  CHECK(encode_request(req) == "SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4\n");
  CHECK(decode_req_ok(encode_request(req)) == req);

  ComputeRequest big{Mode::Literal, Natural("255"), Natural("4096"), Natural("31")};
  CHECK(encode_request(big) == "SNPC1 COMPUTE mode=literal t1c=ff t2c=1000 kc=1f\n");
}

TEST_CASE("request round-trip on random values") {
  num::Rng rng(99);
  Natural huge = Natural(1) << 200;
  for (int i = 0; i < 100; ++i) {
    ComputeRequest req;
    switch (i % 3) {
      case 0: req.mode = Mode::Literal; break;
      case 1: req.mode = Mode::Events; break;
      default: req.mode = Mode::Closed; break;
    }
    req.t1c = num::rand_below(huge, rng) + 1;
    req.t2c = num::rand_below(huge, rng) + 1;
    req.kc = num::rand_below(huge, rng) + 1;
    CHECK(decode_req_ok(encode_request(req)) == req);
  }
}

TEST_CASE("request decode rejections") {
  CHECK(decode_req_err("SNPC1 COMPUTE mode=warp t1c=3 t2c=2 kc=4\n").code ==
        WireError::Code::BadMode);
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=0 t2c=2 kc=4\n").code ==
        WireError::Code::ValueRange);
  CHECK(decode_req_err("SNPC0 COMPUTE mode=closed t1c=3 t2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 RESULT mode=closed t1c=3 t2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 COMPUTE t1c=3 mode=closed t2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=3 t2c=2\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4 x=1\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1  COMPUTE mode=closed t1c=3 t2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
  // Hex must be lowercase with no leading zeros.
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=FF t2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=03 t2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4 \n").code ==
        WireError::Code::BadSyntax);
  CHECK(decode_req_err("SNPC1 COMPUTE mode=closed t1c=3\nt2c=2 kc=4\n").code ==
        WireError::Code::BadSyntax);
}

TEST_CASE("response golden encoding") {
  ComputeResponse resp{14, 15, 9};
  CHECK(encode_response(resp) == "SNPC1 RESULT c2=e ticks=15 events=9\n");
  auto back = decode_response(encode_response(resp));
  REQUIRE(std::holds_alternative<ComputeResponse>(back));
  CHECK(std::get<ComputeResponse>(back) == resp);

  // Zero encodes as plain "0" where it is legal (ticks/events).
  ComputeResponse closed{20, 0, 0};
  CHECK(encode_response(closed) == "SNPC1 RESULT c2=14 ticks=0 events=0\n");
}

TEST_CASE("error lines round-trip with escapes") {
  std::string line = encode_error("OVERBUDGET", "budget \"exceeded\"\nback\\slash");
  auto back = decode_response(line);
  REQUIRE(std::holds_alternative<RemoteError>(back));
  RemoteError err = std::get<RemoteError>(back);
  CHECK(err.code == "OVERBUDGET");
  CHECK(err.message == "budget \"exceeded\"\nback\\slash");

  auto plain = decode_response("SNPC1 ERROR code=VALUE_RANGE msg=\"kc must be nonzero\"\n");
  REQUIRE(std::holds_alternative<RemoteError>(plain));
  CHECK(std::get<RemoteError>(plain).code == "VALUE_RANGE");
}

TEST_CASE("response decode rejections") {
  auto check_syntax = [](const std::string& line) {
    auto result = decode_response(line);
    REQUIRE(std::holds_alternative<WireError>(result));
    CHECK(std::get<WireError>(result).code == WireError::Code::BadSyntax);
  };
  check_syntax("SNPC1 RESULT c2=e ticks=15\n");
  check_syntax("SNPC1 RESULT c2=E ticks=15 events=9\n");
  check_syntax("SNPC1 RESULT c2=e ticks=015 events=9\n");
  check_syntax("SNPC1 WHAT c2=e ticks=15 events=9\n");
  check_syntax("SNPC1 ERROR code=9BAD msg=\"x\"\n");
  check_syntax("SNPC1 ERROR code=OVERBUDGET msg=\"unterminated\n");
  check_syntax("SNPC1 ERROR code=OVERBUDGET msg=\"bad \\q escape\"\n");

  auto zero = decode_response("SNPC1 RESULT c2=0 ticks=1 events=1\n");
  REQUIRE(std::holds_alternative<WireError>(zero));
  CHECK(std::get<WireError>(zero).code == WireError::Code::ValueRange);
}
