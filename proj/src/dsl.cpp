#include "snpc/dsl.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace snpc::dsl {

std::string ParseError::message() const {
  std::ostringstream out;
  out << "line " << span.line << ", col " << span.column << ": expected " << expected
      << ", found " << (found.empty() ? "end of input" : "'" + found + "'");
  return out.str();
}

namespace {

enum class Tok {
  KwSystem,
  KwNeuron,
  KwSpikes,
  KwSyn,
  KwOut,
  KwA,
  KwLambda,
  Ident,
  Nat,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Eq,
  Arrow,
  Slash,
  Pipe,
  Plus,
  Caret,
  End,
};

struct Token {
  Tok type;
  std::string text;
  SourceSpan span;
  Natural value;  // Nat only
};

// Internal control flow for the recursive-descent parser.
struct ParseFailure {
  ParseError error;
};

[[noreturn]] void fail(const Token& at, std::string expected) {
  throw ParseFailure{ParseError{at.span, std::move(expected), at.text}};
}

std::variant<std::vector<Token>, ParseError> lex(const std::string& src) {
  std::vector<Token> tokens;
  size_t pos = 0, line = 1, col = 1;
  auto span_here = [&](size_t length) { return SourceSpan{line, col, length}; };
  auto advance = [&](size_t n) {
    for (size_t i = 0; i < n; ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (pos < src.size()) {
    char c = src[pos];
    if (c == '#') {
      while (pos < src.size() && src[pos] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      SourceSpan span = span_here(0);
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        advance(1);
      std::string text = src.substr(start, pos - start);
      span.length = text.size();
      Natural value;
      mpz_set_str(value.get_mpz_t(), text.c_str(), 10);
      tokens.push_back({Tok::Nat, std::move(text), span, std::move(value)});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      SourceSpan span = span_here(0);
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        advance(1);
      std::string text = src.substr(start, pos - start);
      span.length = text.size();
      Tok type = Tok::Ident;
      if (text == "system") type = Tok::KwSystem;
      else if (text == "neuron") type = Tok::KwNeuron;
      else if (text == "spikes") type = Tok::KwSpikes;
      else if (text == "syn") type = Tok::KwSyn;
      else if (text == "out") type = Tok::KwOut;
      else if (text == "a") type = Tok::KwA;
      else if (text == "lambda") type = Tok::KwLambda;
      tokens.push_back({type, std::move(text), span, 0});
      continue;
    }
    SourceSpan span = span_here(1);
    switch (c) {
      case '{': tokens.push_back({Tok::LBrace, "{", span, 0}); advance(1); continue;
      case '}': tokens.push_back({Tok::RBrace, "}", span, 0}); advance(1); continue;
      case '(': tokens.push_back({Tok::LParen, "(", span, 0}); advance(1); continue;
      case ')': tokens.push_back({Tok::RParen, ")", span, 0}); advance(1); continue;
      case ';': tokens.push_back({Tok::Semi, ";", span, 0}); advance(1); continue;
      case '=': tokens.push_back({Tok::Eq, "=", span, 0}); advance(1); continue;
      case '/': tokens.push_back({Tok::Slash, "/", span, 0}); advance(1); continue;
      case '|': tokens.push_back({Tok::Pipe, "|", span, 0}); advance(1); continue;
      case '+': tokens.push_back({Tok::Plus, "+", span, 0}); advance(1); continue;
      case '^': tokens.push_back({Tok::Caret, "^", span, 0}); advance(1); continue;
      case '-':
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          span.length = 2;
          tokens.push_back({Tok::Arrow, "->", span, 0});
          advance(2);
          continue;
        }
        return ParseError{span, "'->'", "-"};
      default:
        return ParseError{span, "a token", std::string(1, c)};
    }
  }
  tokens.push_back({Tok::End, "", SourceSpan{line, col, 0}, 0});
  return tokens;
}

// Span bookkeeping for mapping validation violations back into the source.
struct SpanTable {
  std::vector<std::pair<std::string, SourceSpan>> neurons;  // declaration order
  std::map<std::tuple<std::string, bool, size_t>, SourceSpan> rules;
  std::map<std::pair<std::string, std::string>, SourceSpan> synapses;
  SourceSpan output;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SnpSystem parse(SpanTable& spans) {
    SnpSystem sys;
    expect(Tok::KwSystem, "'system'");
    sys.name = expect(Tok::Ident, "system name").text;
    expect(Tok::LBrace, "'{'");
    while (peek().type == Tok::KwNeuron) parse_neuron(sys, spans);
    if (sys.neurons.empty()) fail(peek(), "at least one 'neuron' declaration");
    parse_syn(sys, spans);
    expect(Tok::KwOut, "'out'");
    const Token& out = expect(Tok::Ident, "output neuron name");
    sys.output = out.text;
    spans.output = out.span;
    expect(Tok::Semi, "';'");
    expect(Tok::RBrace, "'}'");
    expect(Tok::End, "end of input");
    return sys;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  const Token& expect(Tok type, const char* what) {
    if (peek().type != type) fail(peek(), what);
    return advance();
  }

  Natural parse_positive(const char* what) {
    const Token& tok = expect(Tok::Nat, what);
    if (tok.value < 1) fail(tok, what);
    return tok.value;
  }

  // atom := "a" | "a" "^" NAT ; returns the count.
  Natural parse_atom_count() {
    expect(Tok::KwA, "'a'");
    if (peek().type == Tok::Caret) {
      advance();
      return parse_positive("a positive spike count");
    }
    return 1;
  }

  SpikePattern parse_primary() {
    if (peek().type == Tok::KwA) return SpikePattern::atom(parse_atom_count());
    if (peek().type == Tok::LParen) {
      advance();
      SpikePattern inner = parse_regex();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail(peek(), "'a' or '('");
  }

  SpikePattern parse_factor() {
    SpikePattern p = parse_primary();
    if (peek().type == Tok::Plus) {
      advance();
      return SpikePattern::plus(std::move(p));
    }
    return p;
  }

  SpikePattern parse_term() {
    std::vector<SpikePattern> factors;
    factors.push_back(parse_factor());
    while (peek().type == Tok::KwA || peek().type == Tok::LParen)
      factors.push_back(parse_factor());
    if (factors.size() == 1) return std::move(factors[0]);
    return SpikePattern::concat(std::move(factors));
  }

  SpikePattern parse_regex() {
    std::vector<SpikePattern> terms;
    terms.push_back(parse_term());
    while (peek().type == Tok::Pipe) {
      advance();
      terms.push_back(parse_term());
    }
    if (terms.size() == 1) return std::move(terms[0]);
    return SpikePattern::alt(std::move(terms));
  }

  void parse_rule(Neuron& neuron, SpanTable& spans) {
    const SourceSpan rule_span = peek().span;
    const size_t start_pos = pos_;
    const bool starts_with_a = peek().type == Tok::KwA;
    SpikePattern pattern = parse_regex();
    // A bare atom is exactly "a" or "a^N": no parens, plus or composition.
    const size_t consumed = pos_ - start_pos;
    const bool bare_atom = starts_with_a &&
                           pattern.kind() == SpikePattern::Kind::Atom &&
                           (consumed == 1 || consumed == 3);

    if (peek().type == Tok::Slash) {
      advance();
      Natural consume = parse_atom_count();
      expect(Tok::Arrow, "'->'");
      expect(Tok::KwA, "'a'");
      expect(Tok::Semi, "';'");
      Natural delay = expect(Tok::Nat, "a delay").value;
      expect(Tok::Semi, "';'");
      push_firing(neuron, spans, rule_span, std::move(pattern), std::move(consume),
                  std::move(delay));
      return;
    }
    if (!bare_atom) fail(peek(), "'/'");
    expect(Tok::Arrow, "'->'");
    if (peek().type == Tok::KwA) {
      advance();
      expect(Tok::Semi, "';'");
      Natural delay = expect(Tok::Nat, "a delay").value;
      expect(Tok::Semi, "';'");
      Natural consume = pattern.atom_count();
      push_firing(neuron, spans, rule_span, std::move(pattern), std::move(consume),
                  std::move(delay));
      return;
    }
    if (peek().type == Tok::KwLambda) {
      advance();
      expect(Tok::Semi, "';'");
      spans.rules[{neuron.id, false, neuron.forgetting.size()}] = rule_span;
      neuron.forgetting.push_back(ForgettingRule::make(pattern.atom_count()));
      return;
    }
    fail(peek(), "'a' or 'lambda'");
  }

  void push_firing(Neuron& neuron, SpanTable& spans, const SourceSpan& rule_span,
                   SpikePattern pattern, Natural consume, Natural delay) {
    spans.rules[{neuron.id, true, neuron.firing.size()}] = rule_span;
    try {
      neuron.firing.push_back(
          FiringRule::make(std::move(pattern), std::move(consume), std::move(delay)));
    } catch (const PatternTooComplex& e) {
      throw ParseFailure{ParseError{rule_span, "a compilable pattern", e.what()}};
    }
  }

  void parse_neuron(SnpSystem& sys, SpanTable& spans) {
    expect(Tok::KwNeuron, "'neuron'");
    const Token& name = expect(Tok::Ident, "neuron name");
    spans.neurons.emplace_back(name.text, name.span);
    Neuron neuron;
    neuron.id = name.text;
    expect(Tok::LBrace, "'{'");
    expect(Tok::KwSpikes, "'spikes'");
    expect(Tok::Eq, "'='");
    neuron.initial_spikes = expect(Tok::Nat, "a spike count").value;
    expect(Tok::Semi, "';'");
    while (peek().type != Tok::RBrace && peek().type != Tok::End)
      parse_rule(neuron, spans);
    expect(Tok::RBrace, "'}'");
    sys.neurons.push_back(std::move(neuron));
  }

  void parse_syn(SnpSystem& sys, SpanTable& spans) {
    expect(Tok::KwSyn, "'syn'");
    expect(Tok::LBrace, "'{'");
    while (peek().type == Tok::Ident) {
      const Token& from = advance();
      expect(Tok::Arrow, "'->'");
      const Token& to = expect(Tok::Ident, "a neuron name");
      expect(Tok::Semi, "';'");
      auto pair = std::make_pair(from.text, to.text);
      if (!spans.synapses.count(pair)) spans.synapses[pair] = from.span;
      sys.synapses.insert(std::move(pair));
    }
    expect(Tok::RBrace, "'}'");
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

SourceSpan span_for(const Violation& v, const SpanTable& spans) {
  switch (v.site) {
    case Violation::Site::Neuron: {
      // Point at the last matching declaration (the duplicate, when there
      // are several).
      SourceSpan found{};
      for (const auto& [id, span] : spans.neurons)
        if (id == v.neuron) found = span;
      return found;
    }
    case Violation::Site::Rule: {
      auto it = spans.rules.find({v.neuron, v.firing_rule, v.rule_index});
      return it == spans.rules.end() ? SourceSpan{} : it->second;
    }
    case Violation::Site::Synapse: {
      auto it = spans.synapses.find(v.synapse);
      return it == spans.synapses.end() ? SourceSpan{} : it->second;
    }
    case Violation::Site::Output:
      return spans.output;
    case Violation::Site::System:
      break;
  }
  return SourceSpan{1, 1, 0};
}

std::string lexeme_for(const Violation& v) {
  switch (v.site) {
    case Violation::Site::Neuron:
      return v.neuron;
    case Violation::Site::Synapse:
      return v.synapse.first + " -> " + v.synapse.second;
    default:
      return "";
  }
}

}  // namespace

ParseResult parse_system(const std::string& text) {
  auto lexed = lex(text);
  if (auto* err = std::get_if<ParseError>(&lexed)) return *err;

  SpanTable spans;
  SnpSystem sys;
  try {
    Parser parser(std::move(std::get<std::vector<Token>>(lexed)));
    sys = parser.parse(spans);
  } catch (ParseFailure& failure) {
    return failure.error;
  }

  ValidationReport report = validate_system(sys);
  if (!report.ok()) {
    const Violation& v = report.errors.front();
    return ParseError{span_for(v, spans), v.message, lexeme_for(v)};
  }
  return sys;
}

namespace {

std::string render_atom(const Natural& count) {
  return count == 1 ? "a" : "a^" + to_dec(count);
}

}  // namespace

std::string render_pattern(const SpikePattern& p) {
  switch (p.kind()) {
    case SpikePattern::Kind::Lambda:
      throw DomainError("a bare lambda pattern has no surface syntax");
    case SpikePattern::Kind::Atom:
      return render_atom(p.atom_count());
    case SpikePattern::Kind::Concat: {
      std::string out;
      for (size_t i = 0; i < p.children().size(); ++i) {
        const SpikePattern& child = p.children()[i];
        const bool parens = child.kind() == SpikePattern::Kind::Concat ||
                            child.kind() == SpikePattern::Kind::Union;
        if (i) out += " ";
        out += parens ? "(" + render_pattern(child) + ")" : render_pattern(child);
      }
      return out;
    }
    case SpikePattern::Kind::Union: {
      std::string out;
      for (size_t i = 0; i < p.children().size(); ++i) {
        const SpikePattern& child = p.children()[i];
        const bool parens = child.kind() == SpikePattern::Kind::Union;
        if (i) out += " | ";
        out += parens ? "(" + render_pattern(child) + ")" : render_pattern(child);
      }
      return out;
    }
    case SpikePattern::Kind::Plus: {
      const SpikePattern& child = p.children()[0];
      if (child.kind() == SpikePattern::Kind::Atom)
        return render_pattern(child) + "+";
      return "(" + render_pattern(child) + ")+";
    }
  }
  throw DomainError("unreachable pattern kind");
}

std::string render_system(const SnpSystem& sys) {
  std::ostringstream out;
  out << "system " << sys.name << " {\n";
  for (const Neuron& n : sys.neurons) {
    out << "  neuron " << n.id << " {\n";
    out << "    spikes = " << to_dec(n.initial_spikes) << ";\n";
    for (const FiringRule& rule : n.firing) {
      out << "    ";
      if (rule.pattern.kind() == SpikePattern::Kind::Atom &&
          rule.pattern.atom_count() == rule.consume) {
        out << render_atom(rule.consume);
      } else {
        out << render_pattern(rule.pattern) << " / " << render_atom(rule.consume);
      }
      out << " -> a; " << to_dec(rule.delay) << ";\n";
    }
    for (const ForgettingRule& rule : n.forgetting)
      out << "    " << render_atom(rule.exact) << " -> lambda;\n";
    out << "  }\n";
  }
  out << "  syn {\n";
  for (const auto& [from, to] : sys.synapses)
    out << "    " << from << " -> " << to << ";\n";
  out << "  }\n";
  out << "  out " << sys.output << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace snpc::dsl
