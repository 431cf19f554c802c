#include "snpc/wire.hpp"

#include <optional>
#include <vector>

namespace snpc::proto {
namespace {

constexpr std::string_view kTag = "SNPC1";

WireError bad_syntax(std::string message) {
  return WireError{WireError::Code::BadSyntax, std::move(message)};
}

std::optional<std::string> strip_line(std::string_view line) {
  std::string s(line);
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (s.find('\n') != std::string::npos || s.find('\r') != std::string::npos)
    return std::nullopt;
  return s;
}

std::optional<std::vector<std::string>> split_fields(const std::string& s) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= s.size()) {
    size_t space = s.find(' ', start);
    std::string part = space == std::string::npos ? s.substr(start)
                                                  : s.substr(start, space - start);
    if (part.empty()) return std::nullopt;  // leading/trailing/double space
    parts.push_back(std::move(part));
    if (space == std::string::npos) break;
    start = space + 1;
  }
  return parts;
}

std::optional<std::string> field_value(const std::string& part, std::string_view key) {
  if (part.size() <= key.size() + 1) return std::nullopt;
  if (part.compare(0, key.size(), key) != 0 || part[key.size()] != '=')
    return std::nullopt;
  return part.substr(key.size() + 1);
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<std::string> unescape(std::string_view text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"') return std::nullopt;  // must be escaped
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= text.size()) return std::nullopt;
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case '"': out += '"'; break;
      case 'n': out += '\n'; break;
      default: return std::nullopt;
    }
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  if (!head(s[0])) return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!tail(s[i])) return false;
  return true;
}

}  // namespace

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Literal: return "literal";
    case Mode::Events: return "events";
    case Mode::Closed: return "closed";
  }
  return "?";
}

std::string wire_code_name(WireError::Code code) {
  switch (code) {
    case WireError::Code::BadSyntax: return "BAD_SYNTAX";
    case WireError::Code::BadMode: return "BAD_MODE";
    case WireError::Code::ValueRange: return "VALUE_RANGE";
  }
  return "?";
}

std::string encode_request(const ComputeRequest& req) {
  std::string out(kTag);
  out += " COMPUTE mode=" + mode_name(req.mode);
  out += " t1c=" + to_hex(req.t1c);
  out += " t2c=" + to_hex(req.t2c);
  out += " kc=" + to_hex(req.kc);
  out += "\n";
  return out;
}

std::variant<ComputeRequest, WireError> decode_request(std::string_view line) {
  auto stripped = strip_line(line);
  if (!stripped) return bad_syntax("embedded newline");
  auto parts = split_fields(*stripped);
  if (!parts || parts->size() != 6) return bad_syntax("expected 6 fields");
  const auto& p = *parts;
  if (p[0] != kTag) return bad_syntax("unknown protocol tag: " + p[0]);
  if (p[1] != "COMPUTE") return bad_syntax("unknown request verb: " + p[1]);

  auto mode_text = field_value(p[2], "mode");
  if (!mode_text) return bad_syntax("expected mode=");
  ComputeRequest req;
  if (*mode_text == "literal") req.mode = Mode::Literal;
  else if (*mode_text == "events") req.mode = Mode::Events;
  else if (*mode_text == "closed") req.mode = Mode::Closed;
  else return WireError{WireError::Code::BadMode, "unknown mode: " + *mode_text};

  struct Field {
    const char* key;
    Natural* slot;
  };
  Field fields[] = {{"t1c", &req.t1c}, {"t2c", &req.t2c}, {"kc", &req.kc}};
  for (size_t i = 0; i < 3; ++i) {
    auto text = field_value(p[3 + i], fields[i].key);
    if (!text) return bad_syntax(std::string("expected ") + fields[i].key + "=");
    try {
      *fields[i].slot = from_hex(*text);
    } catch (const DomainError& e) {
      return bad_syntax(e.what());
    }
    if (*fields[i].slot == 0)
      return WireError{WireError::Code::ValueRange,
                       std::string(fields[i].key) + " must be nonzero"};
  }
  return req;
}

std::string encode_response(const ComputeResponse& resp) {
  std::string out(kTag);
  out += " RESULT c2=" + to_hex(resp.c2);
  out += " ticks=" + to_dec(resp.ticks);
  out += " events=" + to_dec(resp.events);
  out += "\n";
  return out;
}

std::string encode_error(const std::string& code, const std::string& message) {
  return std::string(kTag) + " ERROR code=" + code + " msg=\"" + escape(message) +
         "\"\n";
}

std::variant<ComputeResponse, RemoteError, WireError> decode_response(
    std::string_view line) {
  auto stripped = strip_line(line);
  if (!stripped) return bad_syntax("embedded newline");
  const std::string& s = *stripped;

  const std::string result_prefix = std::string(kTag) + " RESULT ";
  const std::string error_prefix = std::string(kTag) + " ERROR ";

  if (s.compare(0, result_prefix.size(), result_prefix) == 0) {
    auto parts = split_fields(s);
    if (!parts || parts->size() != 5) return bad_syntax("expected 5 fields");
    const auto& p = *parts;
    ComputeResponse resp;
    auto c2 = field_value(p[2], "c2");
    auto ticks = field_value(p[3], "ticks");
    auto events = field_value(p[4], "events");
    if (!c2 || !ticks || !events) return bad_syntax("expected c2= ticks= events=");
    try {
      resp.c2 = from_hex(*c2);
      resp.ticks = from_dec(*ticks);
      resp.events = from_dec(*events);
    } catch (const DomainError& e) {
      return bad_syntax(e.what());
    }
    if (resp.c2 == 0)
      return WireError{WireError::Code::ValueRange, "c2 must be nonzero"};
    return resp;
  }

  if (s.compare(0, error_prefix.size(), error_prefix) == 0) {
    std::string rest = s.substr(error_prefix.size());
    auto code = field_value(rest.substr(0, rest.find(' ')), "code");
    if (!code || !is_identifier(*code)) return bad_syntax("expected code=IDENT");
    size_t space = rest.find(' ');
    if (space == std::string::npos) return bad_syntax("expected msg=");
    std::string msg_part = rest.substr(space + 1);
    if (msg_part.size() < 6 || msg_part.compare(0, 5, "msg=\"") != 0 ||
        msg_part.back() != '"')
      return bad_syntax("expected msg=\"...\"");
    auto message = unescape(
        std::string_view(msg_part).substr(5, msg_part.size() - 6));
    if (!message) return bad_syntax("bad escape in msg");
    return RemoteError{*code, *message};
  }

  return bad_syntax("unknown response line");
}

}  // namespace snpc::proto
