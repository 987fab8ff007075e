#include "dcsym/parse.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace dcsym {

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  const ParseOptions& opts;
  bool allow_abs = false;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = add(e, parse_term());
      else if (accept('-'))
        e = sub(e, parse_term());
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = mul(e, parse_unary());
      else if (accept('/'))
        e = div(e, parse_unary());
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return neg(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      // right-associative; exponent may carry a sign
      Expr expo = parse_unary_power();
      return pow(base, expo);
    }
    return base;
  }

  // exponent position: unary sign then a power chain
  Expr parse_unary_power() {
    if (accept('-')) return neg(parse_unary_power());
    if (accept('+')) return parse_unary_power();
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError("unexpected character", pos);
  }

  Expr parse_number() {
    std::size_t start = pos;
    bool is_float = false;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == '.') {
        is_float = true;
        ++pos;
      } else if ((c == 'e' || c == 'E') && pos + 1 < text.size() &&
                 (std::isdigit(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '+' ||
                  text[pos + 1] == '-')) {
        is_float = true;
        pos += 2;
      } else {
        break;
      }
    }
    std::string token(text.substr(start, pos - start));
    if (!is_float) {
      errno = 0;
      char* end = nullptr;
      long long n = std::strtoll(token.c_str(), &end, 10);
      if (errno == 0 && end && *end == '\0') return constant(n, 1LL);
    }
    char* end = nullptr;
    double d = std::strtod(token.c_str(), &end);
    if (!end || *end != '\0') throw ParseError("bad numeric literal", start);
    if (is_float) return number(Number::inexact({d, 0.0}));
    return constant(d);
  }

  Expr parse_identifier() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name(text.substr(start, pos - start));
    if (auto op = unop_from_name(name)) {
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return unary(*op, arg);
    }
    if (allow_abs && name == "abs") {
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return pow(mul(arg, arg), constant(1, 2));
    }
    if (name == "i") {
      if (!opts.complex_mode) throw ParseError("imaginary unit outside complex mode", start);
      return number(Number::inexact({0.0, 1.0}));
    }
    if (auto v = var_from_name(name)) return variable(*v);
    return param(std::move(name));
  }
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& opts) {
  Lexer lex{text, 0, opts};
  if (lex.eof()) throw ParseError("empty input", 0);
  Expr e = lex.parse_expr();
  if (!lex.eof()) throw ParseError("trailing input", lex.pos);
  return e;
}

// ---------------------------------------------------------------------------
// Predicates

Predicate Predicate::always() { return Predicate{}; }

Predicate Predicate::parse(std::string_view text) {
  Predicate out;
  out.text_ = std::string(text);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t amp = text.find('&', start);
    std::string_view clause = text.substr(start, amp == std::string_view::npos ? amp : amp - start);
    start = amp == std::string_view::npos ? text.size() + 1 : amp + 1;
    if (clause.find_first_not_of(" \t") == std::string_view::npos) continue;

    int op = -1;
    std::size_t at = std::string_view::npos;
    std::size_t len = 0;
    const struct { const char* tok; int op; } ops[] = {
        {"<=", 2}, {">=", 3}, {"!=", 4}, {"<", 0}, {">", 1}};
    for (const auto& o : ops) {
      auto p = clause.find(o.tok);
      if (p != std::string_view::npos) {
        at = p;
        op = o.op;
        len = std::string(o.tok).size();
        break;
      }
    }
    if (op < 0) throw ParseError("predicate without comparison", 0);
    ParseOptions popts;
    Lexer ll{clause.substr(0, at), 0, popts};
    ll.allow_abs = true;
    Expr lhs = ll.parse_expr();
    if (!ll.eof()) throw ParseError("trailing input in predicate lhs", ll.pos);
    Lexer lr{clause.substr(at + len), 0, popts};
    lr.allow_abs = true;
    Expr rhs = lr.parse_expr();
    if (!lr.eof()) throw ParseError("trailing input in predicate rhs", lr.pos);
    out.clauses_.push_back({lhs, rhs, op});
  }
  return out;
}

bool Predicate::eval(double t_val, double x_val) const {
  Valuation val;
  val.set(Var::t, t_val);
  val.set(Var::x, x_val);
  for (const Clause& c : clauses_) {
    double l, r;
    try {
      l = dcsym::eval(c.lhs, val).real();
      r = dcsym::eval(c.rhs, val).real();
    } catch (const EvalError&) {
      return false;
    }
    switch (c.op) {
      case 0: if (!(l < r)) return false; break;
      case 1: if (!(l > r)) return false; break;
      case 2: if (!(l <= r)) return false; break;
      case 3: if (!(l >= r)) return false; break;
      case 4: if (!(std::abs(l - r) > 1e-12)) return false; break;
      default: return false;
    }
  }
  return true;
}

}  // namespace dcsym
