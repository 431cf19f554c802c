#pragma once

#include <string>
#include <variant>

#include "snpc/system.hpp"

namespace snpc::dsl {

struct SourceSpan {
  size_t line = 1;    // 1-based
  size_t column = 1;  // 1-based
  size_t length = 0;
};

struct ParseError {
  SourceSpan span;
  std::string expected;
  std::string found;

  std::string message() const;
};

using ParseResult = std::variant<SnpSystem, ParseError>;

// Parses the .snp text format:
//
//   system   := "system" IDENT "{" neuron+ syn out "}"
//   neuron   := "neuron" IDENT "{" "spikes" "=" NAT ";" rule* "}"
//   rule     := regex "/" atom "->" "a" ";" NAT ";"     firing, E/a^r -> a;d
//             | atom "->" "a" ";" NAT ";"               firing with E = a^r
//             | atom "->" "lambda" ";"                  forgetting
//   syn      := "syn" "{" (IDENT "->" IDENT ";")* "}"
//   out      := "out" IDENT ";"
//   regex    := term ("|" term)* ;  term := factor+ ;  factor := primary ["+"]
//   primary  := atom | "(" regex ")" ;  atom := "a" | "a" "^" NAT
//
// Whitespace-insensitive; "#" starts a line comment; NAT is decimal of
// unbounded size. On success the system has passed validate_system;
// violations come back as ParseErrors carrying the span of the offending
// construct.
ParseResult parse_system(const std::string& text);

// Canonical text: one declaration per line, two-space indentation, firing
// rules before forgetting rules. Parsing the result yields a structurally
// equal system, and rendering is deterministic. Patterns containing a bare
// lambda node are not expressible in the surface syntax and raise
// DomainError.
std::string render_system(const SnpSystem& sys);

std::string render_pattern(const SpikePattern& p);

}  // namespace snpc::dsl
