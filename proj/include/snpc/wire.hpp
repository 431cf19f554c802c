#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "snpc/common.hpp"

namespace snpc::proto {

enum class Mode { Literal, Events, Closed };

std::string mode_name(Mode mode);

struct ComputeRequest {
  Mode mode = Mode::Closed;
  // Ciphertext second components; the server never sees first components.
  Natural t1c;
  Natural t2c;
  Natural kc;

  bool operator==(const ComputeRequest&) const = default;
};

struct ComputeResponse {
  Natural c2;      // the UNREDUCED natural t1c*kc + t2c
  Natural ticks;   // simulated clock of the run; 0 in closed mode
  Natural events;  // events executed; 0 in closed mode

  bool operator==(const ComputeResponse&) const = default;
};

struct WireError {
  enum class Code { BadSyntax, BadMode, ValueRange };
  Code code;
  std::string message;
};

std::string wire_code_name(WireError::Code code);

// Decoded server-side failure line.
struct RemoteError {
  std::string code;  // BAD_SYNTAX | BAD_MODE | VALUE_RANGE | OVERBUDGET | INTERNAL
  std::string message;
};

// Wire protocol SNPC1: UTF-8 lines terminated by \n, space-separated
// key=value fields, integers in lowercase hex without leading zeros ("0" for
// zero); ticks and events are decimal. One request per connection.
//
//   SNPC1 COMPUTE mode=closed t1c=3 t2c=2 kc=4
//   SNPC1 RESULT c2=e ticks=15 events=9
//   SNPC1 ERROR code=OVERBUDGET msg="..."
std::string encode_request(const ComputeRequest& req);
std::variant<ComputeRequest, WireError> decode_request(std::string_view line);

std::string encode_response(const ComputeResponse& resp);
std::string encode_error(const std::string& code, const std::string& message);
std::variant<ComputeResponse, RemoteError, WireError> decode_response(
    std::string_view line);

}  // namespace snpc::proto
