#include "dcsym/expr.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace dcsym {

namespace {

const char* kVarNames[] = {
    "t", "x", "u", "v",
    "u_t", "u_x", "u_xx", "u_xxx", "u_xxxx", "u_tx", "u_tt", "u_txx",
    "v_t", "v_x", "v_xx", "v_xxx", "v_xxxx", "v_tx", "v_tt", "v_txx",
};

const char* kUnopNames[] = {"neg", "exp", "ln", "sqrt", "arctan", "sin", "cos", "tan", "sinh", "cosh", "tanh", "coth"};

}  // namespace

const char* var_name(Var v) { return kVarNames[static_cast<std::size_t>(v)]; }

std::optional<Var> var_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kVarCount; ++i)
    if (name == kVarNames[i]) return static_cast<Var>(i);
  return std::nullopt;
}

const char* unop_name(UnOp op) { return kUnopNames[static_cast<std::size_t>(op)]; }

std::optional<UnOp> unop_from_name(std::string_view name) {
  for (std::size_t i = 0; i < 12; ++i)
    if (name == kUnopNames[i]) return static_cast<UnOp>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Number

namespace {

bool add_overflow(long long a, long long b, long long* r) { return __builtin_saddll_overflow(a, b, r); }
bool mul_overflow(long long a, long long b, long long* r) { return __builtin_smulll_overflow(a, b, r); }

}  // namespace

Number Number::rational(long long n, long long d) {
  if (d == 0) throw EvalError("rational with zero denominator");
  if (d < 0) { n = -n; d = -d; }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) { n /= g; d /= g; }
  Number out;
  out.exact = true;
  out.num = n;
  out.den = d;
  out.cval = {static_cast<double>(n) / static_cast<double>(d), 0.0};
  return out;
}

Number Number::inexact(std::complex<double> z) {
  Number out;
  out.exact = false;
  out.cval = z;
  return out;
}

std::complex<double> Number::value() const {
  if (exact) return {static_cast<double>(num) / static_cast<double>(den), 0.0};
  return cval;
}

bool Number::is_zero() const { return exact ? num == 0 : (cval.real() == 0.0 && cval.imag() == 0.0); }
bool Number::is_one() const { return exact ? (num == 1 && den == 1) : (cval.real() == 1.0 && cval.imag() == 0.0); }
bool Number::is_integer() const { return exact && den == 1; }
bool Number::is_real() const { return exact || cval.imag() == 0.0; }

Number Number::add(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    long long n1, n2, n, d;
    if (!mul_overflow(a.num, b.den, &n1) && !mul_overflow(b.num, a.den, &n2) &&
        !add_overflow(n1, n2, &n) && !mul_overflow(a.den, b.den, &d))
      return rational(n, d);
  }
  return inexact(a.value() + b.value());
}

Number Number::mul(const Number& a, const Number& b) {
  if (a.exact && b.exact) {
    long long n, d;
    if (!mul_overflow(a.num, b.num, &n) && !mul_overflow(a.den, b.den, &d)) return rational(n, d);
  }
  return inexact(a.value() * b.value());
}

Number Number::neg(const Number& a) {
  if (a.exact) return rational(-a.num, a.den);
  return inexact(-a.cval);
}

std::optional<Number> Number::pow(const Number& a, const Number& b) {
  if (a.exact && b.is_integer()) {
    long long e = b.num;
    if (e >= -62 && e <= 62) {
      long long n = 1, d = 1;
      long long bn = e >= 0 ? a.num : a.den;
      long long bd = e >= 0 ? a.den : a.num;
      if (e < 0 && a.num == 0) return std::nullopt;
      if (bd < 0) { bd = -bd; bn = -bn; }
      long long k = e >= 0 ? e : -e;
      bool ok = true;
      for (long long i = 0; i < k && ok; ++i)
        ok = !mul_overflow(n, bn, &n) && !mul_overflow(d, bd, &d);
      if (ok) return rational(n, d);
    }
  }
  return std::nullopt;
}

int compare(const Number& a, const Number& b) {
  if (a.exact != b.exact) return a.exact ? -1 : 1;
  if (a.exact) {
    // cross-multiplied comparison in double is fine for ordering purposes
    double lhs = static_cast<double>(a.num) * static_cast<double>(b.den);
    double rhs = static_cast<double>(b.num) * static_cast<double>(a.den);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    if (a.den != b.den) return a.den < b.den ? -1 : 1;
    return 0;
  }
  if (a.cval.real() != b.cval.real()) return a.cval.real() < b.cval.real() ? -1 : 1;
  if (a.cval.imag() != b.cval.imag()) return a.cval.imag() < b.cval.imag() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Expr basics

namespace {

Expr make_node(Node&& n) { return Expr(std::make_shared<const Node>(std::move(n))); }

const Expr& zero_expr() {
  static const Expr e = number(Number::rational(0));
  return e;
}
const Expr& one_expr() {
  static const Expr e = number(Number::rational(1));
  return e;
}

}  // namespace

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_number() const { return node_->kind == Kind::Num; }
bool Expr::is_zero() const { return is_number() && node_->num.is_zero(); }
bool Expr::is_one() const { return is_number() && node_->num.is_one(); }

std::optional<Number> Expr::number() const {
  if (node_->kind == Kind::Num) return node_->num;
  return std::nullopt;
}

Expr number(const Number& n) {
  Node node;
  node.kind = Kind::Num;
  node.num = n;
  return make_node(std::move(node));
}

Expr constant(long long n, long long d) { return number(Number::rational(n, d)); }

Expr constant(double x) {
  // Integral doubles of modest size become exact rationals so that
  // folded arithmetic stays exact.
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15)
    return number(Number::rational(static_cast<long long>(x)));
  return number(Number::inexact({x, 0.0}));
}

Expr constant(std::complex<double> z) {
  if (z.imag() == 0.0) return constant(z.real());
  return number(Number::inexact(z));
}

Expr param(std::string name) {
  Node node;
  node.kind = Kind::Param;
  node.name = std::move(name);
  return make_node(std::move(node));
}

Expr variable(Var v) {
  Node node;
  node.kind = Kind::Variable;
  node.var = v;
  return make_node(std::move(node));
}

int compare(const Expr& a, const Expr& b) {
  if (a.ptr() == b.ptr()) return 0;
  const Node& na = a.node();
  const Node& nb = b.node();
  if (na.kind != nb.kind) return na.kind < nb.kind ? -1 : 1;
  switch (na.kind) {
    case Kind::Num:
      return compare(na.num, nb.num);
    case Kind::Param:
      return na.name.compare(nb.name) < 0 ? -1 : (na.name == nb.name ? 0 : 1);
    case Kind::Variable:
      return na.var == nb.var ? 0 : (na.var < nb.var ? -1 : 1);
    case Kind::Unary: {
      if (na.uop != nb.uop) return na.uop < nb.uop ? -1 : 1;
      return compare(na.a, nb.a);
    }
    case Kind::Binary: {
      if (na.bop != nb.bop) return na.bop < nb.bop ? -1 : 1;
      int c = compare(na.a, nb.a);
      if (c != 0) return c;
      return compare(na.b, nb.b);
    }
  }
  return 0;
}

bool structural_equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Normalizing constructors

namespace {

Expr make_add(std::vector<Expr> terms);
Expr make_mul(std::vector<Expr> factors);
Expr make_pow(const Expr& base, const Expr& exponent);

void flatten(BinOp op, const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == Kind::Binary && e.node().bop == op) {
    flatten(op, e.node().a, out);
    flatten(op, e.node().b, out);
  } else {
    out.push_back(e);
  }
}

// Splits a product term into (numeric coefficient, remaining core).
std::pair<Number, Expr> split_coeff(const Expr& term) {
  if (term.kind() == Kind::Num) return {term.node().num, one_expr()};
  if (term.kind() == Kind::Binary && term.node().bop == BinOp::Mul) {
    std::vector<Expr> factors;
    flatten(BinOp::Mul, term, factors);
    Number coeff = Number::rational(1);
    std::vector<Expr> rest;
    for (const Expr& f : factors) {
      if (f.kind() == Kind::Num)
        coeff = Number::mul(coeff, f.node().num);
      else
        rest.push_back(f);
    }
    if (rest.empty()) return {coeff, one_expr()};
    if (rest.size() == 1) return {coeff, rest[0]};
    // factors are already canonical and sorted within a normalized term
    Expr core = rest[0];
    for (std::size_t i = 1; i < rest.size(); ++i) {
      Node n;
      n.kind = Kind::Binary;
      n.bop = BinOp::Mul;
      n.a = core;
      n.b = rest[i];
      core = make_node(std::move(n));
    }
    return {coeff, core};
  }
  return {Number::rational(1), term};
}

// Splits a factor into (base, exponent).
std::pair<Expr, Expr> split_pow(const Expr& factor) {
  if (factor.kind() == Kind::Binary && factor.node().bop == BinOp::Pow)
    return {factor.node().a, factor.node().b};
  return {factor, one_expr()};
}

Expr raw_binary(BinOp op, const Expr& a, const Expr& b) {
  Node n;
  n.kind = Kind::Binary;
  n.bop = op;
  n.a = a;
  n.b = b;
  return make_node(std::move(n));
}

Expr make_add(std::vector<Expr> in) {
  std::vector<Expr> terms;
  for (const Expr& e : in) flatten(BinOp::Add, e, terms);

  Number const_acc = Number::rational(0);
  std::vector<std::pair<Expr, Number>> collected;  // core -> coefficient
  for (const Expr& term : terms) {
    if (term.is_zero()) continue;
    auto [coeff, core] = split_coeff(term);
    if (core.is_one()) {
      const_acc = Number::add(const_acc, coeff);
      continue;
    }
    bool merged = false;
    for (auto& [c, acc] : collected) {
      if (structural_equal(c, core)) {
        acc = Number::add(acc, coeff);
        merged = true;
        break;
      }
    }
    if (!merged) collected.emplace_back(core, coeff);
  }

  std::vector<Expr> rebuilt;
  if (!const_acc.is_zero()) rebuilt.push_back(number(const_acc));
  std::sort(collected.begin(), collected.end(),
            [](const auto& p, const auto& q) { return compare(p.first, q.first) < 0; });
  for (auto& [core, coeff] : collected) {
    if (coeff.is_zero()) continue;
    if (coeff.is_one())
      rebuilt.push_back(core);
    else
      rebuilt.push_back(make_mul({number(coeff), core}));
  }
  if (rebuilt.empty()) return zero_expr();
  Expr out = rebuilt[0];
  for (std::size_t i = 1; i < rebuilt.size(); ++i) out = raw_binary(BinOp::Add, out, rebuilt[i]);
  return out;
}

Expr make_mul(std::vector<Expr> in) {
  std::vector<Expr> factors;
  for (const Expr& e : in) flatten(BinOp::Mul, e, factors);

  Number coeff = Number::rational(1);
  std::vector<std::pair<Expr, Expr>> bases;  // base -> exponent sum
  for (const Expr& f : factors) {
    if (f.kind() == Kind::Num) {
      coeff = Number::mul(coeff, f.node().num);
      continue;
    }
    auto [base, ex] = split_pow(f);
    bool merged = false;
    for (auto& [b, e] : bases) {
      if (structural_equal(b, base)) {
        e = make_add({e, ex});
        merged = true;
        break;
      }
    }
    if (!merged) bases.emplace_back(base, ex);
  }
  if (coeff.is_zero()) return zero_expr();

  std::vector<Expr> rebuilt;
  for (auto& [base, ex] : bases) {
    Expr f = make_pow(base, ex);
    if (f.is_one()) continue;
    if (f.kind() == Kind::Num) {
      coeff = Number::mul(coeff, f.node().num);
      continue;
    }
    rebuilt.push_back(f);
  }
  std::sort(rebuilt.begin(), rebuilt.end(), [](const Expr& p, const Expr& q) { return compare(p, q) < 0; });
  if (!coeff.is_one()) rebuilt.insert(rebuilt.begin(), number(coeff));
  if (rebuilt.empty()) return one_expr();
  Expr out = rebuilt[0];
  for (std::size_t i = 1; i < rebuilt.size(); ++i) out = raw_binary(BinOp::Mul, out, rebuilt[i]);
  return out;
}

Expr make_pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return one_expr();
  if (exponent.is_one()) return base;
  if (base.is_one()) return one_expr();
  if (base.is_zero()) {
    auto n = exponent.number();
    if (n && n->is_real() && n->value().real() > 0) return zero_expr();
  }
  auto bn = base.number();
  auto en = exponent.number();
  if (bn && en) {
    if (auto folded = Number::pow(*bn, *en)) return number(*folded);
    if (!bn->exact || !en->exact) {
      // inexact fold; real paths stay real, otherwise principal branch
      std::complex<double> b = bn->value(), e = en->value();
      if (b.imag() == 0.0 && e.imag() == 0.0) {
        double br = b.real(), er = e.real();
        if (br > 0.0 || (br != 0.0 && er == std::floor(er) && std::abs(er) < 1e9))
          return constant(std::pow(br, er));
        if (br == 0.0 && er > 0.0) return constant(0.0);
      }
      return constant(std::pow(b, e));
    }
  }
  // (x^p)^n for integer n is branch-safe
  if (base.kind() == Kind::Binary && base.node().bop == BinOp::Pow) {
    if (en && en->is_integer()) return make_pow(base.node().a, make_mul({base.node().b, number(*en)}));
  }
  // (a*b)^n for integer n distributes
  if (base.kind() == Kind::Binary && base.node().bop == BinOp::Mul && en && en->is_integer()) {
    std::vector<Expr> factors;
    flatten(BinOp::Mul, base, factors);
    std::vector<Expr> out;
    out.reserve(factors.size());
    for (const Expr& f : factors) out.push_back(make_pow(f, exponent));
    return make_mul(std::move(out));
  }
  return raw_binary(BinOp::Pow, base, exponent);
}

Expr make_unary(UnOp op, const Expr& a) {
  if (op == UnOp::Neg) return make_mul({number(Number::rational(-1)), a});
  if (op == UnOp::Sqrt) return make_pow(a, number(Number::rational(1, 2)));
  if (auto n = a.number()) {
    // identity table on exact constants; other constant arguments stay
    // symbolic so exactness is never silently lost
    if (n->is_zero()) {
      switch (op) {
        case UnOp::Exp: case UnOp::Cos: case UnOp::Cosh: return one_expr();
        case UnOp::Sin: case UnOp::Tan: case UnOp::Sinh: case UnOp::Tanh: case UnOp::Arctan: return zero_expr();
        default: break;
      }
    }
    if (n->is_one() && op == UnOp::Ln) return zero_expr();
  }
  Node node;
  node.kind = Kind::Unary;
  node.uop = op;
  node.a = a;
  return make_node(std::move(node));
}

}  // namespace

Expr add(const Expr& a, const Expr& b) { return make_add({a, b}); }
Expr sub(const Expr& a, const Expr& b) { return make_add({a, make_mul({number(Number::rational(-1)), b})}); }
Expr mul(const Expr& a, const Expr& b) { return make_mul({a, b}); }
Expr div(const Expr& a, const Expr& b) { return make_mul({a, make_pow(b, number(Number::rational(-1)))}); }
Expr pow(const Expr& base, const Expr& exponent) { return make_pow(base, exponent); }
Expr neg(const Expr& a) { return make_mul({number(Number::rational(-1)), a}); }
Expr unary(UnOp op, const Expr& a) { return make_unary(op, a); }

Expr normalize(const Expr& e) {
  switch (e.kind()) {
    case Kind::Num:
    case Kind::Param:
    case Kind::Variable:
      return e;
    case Kind::Unary:
      return make_unary(e.node().uop, normalize(e.node().a));
    case Kind::Binary: {
      Expr a = normalize(e.node().a);
      Expr b = normalize(e.node().b);
      switch (e.node().bop) {
        case BinOp::Add: return add(a, b);
        case BinOp::Sub: return sub(a, b);
        case BinOp::Mul: return mul(a, b);
        case BinOp::Div: return div(a, b);
        case BinOp::Pow: return pow(a, b);
      }
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using C = std::complex<double>;

constexpr double kDivFloor = 1e-300;

C eval_pow(C base, C expo) {
  if (base.imag() == 0.0 && expo.imag() == 0.0) {
    double b = base.real(), e = expo.real();
    if (b > 0.0) return {std::pow(b, e), 0.0};
    if (b == 0.0) {
      if (e > 0.0) return {0.0, 0.0};
      throw EvalError("pow: zero base with non-positive exponent");
    }
    if (e == std::floor(e) && std::abs(e) < 1e9) return {std::pow(b, e), 0.0};
    // negative base, fractional exponent: principal complex branch
  }
  if (std::abs(base) < kDivFloor && expo.real() < 0.0) throw EvalError("pow: division by near-zero");
  return std::pow(base, expo);
}

C eval_unary(UnOp op, C z) {
  const bool re = z.imag() == 0.0;
  switch (op) {
    case UnOp::Neg: return -z;
    case UnOp::Exp: return re ? C(std::exp(z.real()), 0.0) : std::exp(z);
    case UnOp::Ln:
      if (re && z.real() > 0.0) return {std::log(z.real()), 0.0};
      if (std::abs(z) < kDivFloor) throw EvalError("ln of zero");
      return std::log(z);
    case UnOp::Sqrt:
      if (re && z.real() >= 0.0) return {std::sqrt(z.real()), 0.0};
      return std::sqrt(z);
    case UnOp::Arctan:
      if (re) return {std::atan(z.real()), 0.0};
      return std::atan(z);
    case UnOp::Sin: return re ? C(std::sin(z.real()), 0.0) : std::sin(z);
    case UnOp::Cos: return re ? C(std::cos(z.real()), 0.0) : std::cos(z);
    case UnOp::Tan: {
      if (re) {
        double c = std::cos(z.real());
        if (std::abs(c) < kDivFloor) throw EvalError("tan at pole");
        return {std::tan(z.real()), 0.0};
      }
      return std::tan(z);
    }
    case UnOp::Sinh: return re ? C(std::sinh(z.real()), 0.0) : std::sinh(z);
    case UnOp::Cosh: return re ? C(std::cosh(z.real()), 0.0) : std::cosh(z);
    case UnOp::Tanh: return re ? C(std::tanh(z.real()), 0.0) : std::tanh(z);
    case UnOp::Coth: {
      C s = re ? C(std::sinh(z.real()), 0.0) : std::sinh(z);
      if (std::abs(s) < kDivFloor) throw EvalError("coth at pole");
      C c = re ? C(std::cosh(z.real()), 0.0) : std::cosh(z);
      return c / s;
    }
  }
  throw EvalError("bad unary op");
}

C eval_rec(const Expr& e, const Valuation& val, double* scale) {
  C out;
  switch (e.kind()) {
    case Kind::Num:
      out = e.node().num.value();
      break;
    case Kind::Param: {
      auto it = val.params.find(e.node().name);
      if (it == val.params.end()) throw EvalError("unbound parameter: " + e.node().name);
      out = it->second;
      break;
    }
    case Kind::Variable: {
      auto idx = static_cast<std::size_t>(e.node().var);
      if (!val.bound[idx]) throw EvalError(std::string("unbound variable: ") + var_name(e.node().var));
      out = val.vars[idx];
      break;
    }
    case Kind::Unary:
      out = eval_unary(e.node().uop, eval_rec(e.node().a, val, scale));
      break;
    case Kind::Binary: {
      C a = eval_rec(e.node().a, val, scale);
      C b = eval_rec(e.node().b, val, scale);
      switch (e.node().bop) {
        case BinOp::Add: out = a + b; break;
        case BinOp::Sub: out = a - b; break;
        case BinOp::Mul: out = a * b; break;
        case BinOp::Div:
          if (std::abs(b) < kDivFloor) throw EvalError("division by near-zero");
          out = a / b;
          break;
        case BinOp::Pow: out = eval_pow(a, b); break;
      }
      break;
    }
  }
  if (scale) *scale = std::max(*scale, std::abs(out));
  return out;
}

}  // namespace

std::complex<double> eval(const Expr& e, const Valuation& val) { return eval_rec(e, val, nullptr); }

EvalScale eval_with_scale(const Expr& e, const Valuation& val) {
  EvalScale out;
  out.scale = 0.0;
  out.value = eval_rec(e, val, &out.scale);
  return out;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr diff(const Expr& e, Var v) {
  switch (e.kind()) {
    case Kind::Num:
    case Kind::Param:
      return zero_expr();
    case Kind::Variable:
      return e.node().var == v ? one_expr() : zero_expr();
    case Kind::Unary: {
      const Expr& a = e.node().a;
      Expr da = diff(a, v);
      if (da.is_zero()) return zero_expr();
      switch (e.node().uop) {
        case UnOp::Neg: return neg(da);
        case UnOp::Exp: return mul(exp(a), da);
        case UnOp::Ln: return div(da, a);
        case UnOp::Sqrt: return mul(mul(constant(1, 2), pow(a, constant(-1, 2))), da);
        case UnOp::Arctan: return div(da, add(one_expr(), mul(a, a)));
        case UnOp::Sin: return mul(cos(a), da);
        case UnOp::Cos: return neg(mul(sin(a), da));
        case UnOp::Tan: return mul(add(one_expr(), mul(tan(a), tan(a))), da);
        case UnOp::Sinh: return mul(cosh(a), da);
        case UnOp::Cosh: return mul(sinh(a), da);
        case UnOp::Tanh: return mul(sub(one_expr(), mul(tanh(a), tanh(a))), da);
        case UnOp::Coth: return mul(sub(one_expr(), mul(coth(a), coth(a))), da);
      }
      return zero_expr();
    }
    case Kind::Binary: {
      const Expr& a = e.node().a;
      const Expr& b = e.node().b;
      switch (e.node().bop) {
        case BinOp::Add: return add(diff(a, v), diff(b, v));
        case BinOp::Sub: return sub(diff(a, v), diff(b, v));
        case BinOp::Mul: return add(mul(diff(a, v), b), mul(a, diff(b, v)));
        case BinOp::Div: return div(sub(mul(diff(a, v), b), mul(a, diff(b, v))), mul(b, b));
        case BinOp::Pow: {
          Expr db = diff(b, v);
          Expr da = diff(a, v);
          if (db.is_zero()) {
            if (da.is_zero()) return zero_expr();
            return mul(mul(b, pow(a, sub(b, one_expr()))), da);
          }
          // general rule a^b * (db ln a + b da / a)
          Expr term = add(mul(db, ln(a)), div(mul(b, da), a));
          return mul(pow(a, b), term);
        }
      }
    }
  }
  return zero_expr();
}

// ---------------------------------------------------------------------------
// Total derivative

namespace {

std::optional<Var> raise_x(Var v) {
  switch (v) {
    case Var::u: return Var::u_x;
    case Var::u_x: return Var::u_xx;
    case Var::u_xx: return Var::u_xxx;
    case Var::u_xxx: return Var::u_xxxx;
    case Var::u_t: return Var::u_tx;
    case Var::u_tx: return Var::u_txx;
    case Var::v: return Var::v_x;
    case Var::v_x: return Var::v_xx;
    case Var::v_xx: return Var::v_xxx;
    case Var::v_xxx: return Var::v_xxxx;
    case Var::v_t: return Var::v_tx;
    case Var::v_tx: return Var::v_txx;
    default: return std::nullopt;
  }
}

std::optional<Var> raise_t(Var v) {
  switch (v) {
    case Var::u: return Var::u_t;
    case Var::u_x: return Var::u_tx;
    case Var::u_t: return Var::u_tt;
    case Var::u_xx: return Var::u_txx;
    case Var::v: return Var::v_t;
    case Var::v_x: return Var::v_tx;
    case Var::v_t: return Var::v_tt;
    case Var::v_xx: return Var::v_txx;
    default: return std::nullopt;
  }
}

}  // namespace

Expr total_derivative(const Expr& e, Var wrt) {
  if (wrt != Var::t && wrt != Var::x) throw std::invalid_argument("total_derivative: wrt must be t or x");
  std::array<bool, kVarCount> present{};
  collect_free_vars(e, present);
  Expr out = diff(e, wrt);
  for (std::size_t i = 0; i < kVarCount; ++i) {
    if (!present[i]) continue;
    Var vi = static_cast<Var>(i);
    if (vi == Var::t || vi == Var::x) continue;
    Expr d = diff(e, vi);
    if (d.is_zero()) continue;
    auto raised = (wrt == Var::x) ? raise_x(vi) : raise_t(vi);
    if (!raised)
      throw std::invalid_argument(std::string("total_derivative: no jet coordinate above ") + var_name(vi));
    out = add(out, mul(d, variable(*raised)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution, free symbols

namespace {

Expr subst_rec(const Expr& e, const Subst& s) {
  switch (e.kind()) {
    case Kind::Num:
      return e;
    case Kind::Param: {
      auto it = s.params.find(e.node().name);
      return it != s.params.end() ? it->second : e;
    }
    case Kind::Variable: {
      auto it = s.vars.find(e.node().var);
      return it != s.vars.end() ? it->second : e;
    }
    case Kind::Unary:
      return make_unary(e.node().uop, subst_rec(e.node().a, s));
    case Kind::Binary: {
      Expr a = subst_rec(e.node().a, s);
      Expr b = subst_rec(e.node().b, s);
      switch (e.node().bop) {
        case BinOp::Add: return add(a, b);
        case BinOp::Sub: return sub(a, b);
        case BinOp::Mul: return mul(a, b);
        case BinOp::Div: return div(a, b);
        case BinOp::Pow: return pow(a, b);
      }
    }
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const Subst& s) { return subst_rec(e, s); }

void collect_free_vars(const Expr& e, std::array<bool, kVarCount>& out) {
  switch (e.kind()) {
    case Kind::Num:
    case Kind::Param:
      return;
    case Kind::Variable:
      out[static_cast<std::size_t>(e.node().var)] = true;
      return;
    case Kind::Unary:
      collect_free_vars(e.node().a, out);
      return;
    case Kind::Binary:
      collect_free_vars(e.node().a, out);
      collect_free_vars(e.node().b, out);
      return;
  }
}

std::set<std::string> free_params(const Expr& e) {
  std::set<std::string> out;
  struct Walk {
    std::set<std::string>& out;
    void operator()(const Expr& e) {
      switch (e.kind()) {
        case Kind::Param: out.insert(e.node().name); return;
        case Kind::Unary: (*this)(e.node().a); return;
        case Kind::Binary: (*this)(e.node().a); (*this)(e.node().b); return;
        default: return;
      }
    }
  } walk{out};
  walk(e);
  return out;
}

bool depends_on(const Expr& e, Var v) {
  std::array<bool, kVarCount> present{};
  collect_free_vars(e, present);
  return present[static_cast<std::size_t>(v)];
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  // force a float token so round-tripping preserves the inexact kind
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string format_number(const Number& n, bool need_parens_if_negative) {
  std::string s;
  if (n.exact) {
    s = std::to_string(n.num);
    if (n.den != 1) s += "/" + std::to_string(n.den);
  } else if (n.cval.imag() == 0.0) {
    s = format_double(n.cval.real());
  } else {
    std::string re = format_double(n.cval.real());
    std::string im = format_double(std::abs(n.cval.imag()));
    s = "(" + re + (n.cval.imag() < 0 ? "-" : "+") + im + "*i)";
    return s;
  }
  bool negative = n.exact ? n.num < 0 : n.cval.real() < 0;
  if (negative && need_parens_if_negative) return "(" + s + ")";
  return s;
}

// precedence: 0 add, 1 mul, 2 unary-minus scope, 3 pow operand
void print_rec(const Expr& e, int parent_prec, std::string& out) {
  switch (e.kind()) {
    case Kind::Num: {
      const Number& n = e.node().num;
      bool neg = !n.exact ? (n.cval.imag() == 0.0 && n.cval.real() < 0) : n.num < 0;
      std::string s = format_number(n, false);
      if (neg && parent_prec >= 1) out += "(" + s + ")";
      else out += s;
      return;
    }
    case Kind::Param:
      out += e.node().name;
      return;
    case Kind::Variable:
      out += var_name(e.node().var);
      return;
    case Kind::Unary:
      out += unop_name(e.node().uop);
      out += "(";
      print_rec(e.node().a, 0, out);
      out += ")";
      return;
    case Kind::Binary: {
      const Node& n = e.node();
      switch (n.bop) {
        case BinOp::Add: {
          bool parens = parent_prec >= 1;
          if (parens) out += "(";
          print_rec(n.a, 0, out);
          // render negative-coefficient right operands with a minus
          const Expr& rhs = n.b;
          auto [coeff, core] = split_coeff(rhs);
          bool neg = coeff.exact ? coeff.num < 0 : (coeff.cval.imag() == 0.0 && coeff.cval.real() < 0);
          if (neg) {
            out += " - ";
            Expr pos = make_mul({number(Number::neg(coeff)), core});
            print_rec(pos, 1, out);
          } else {
            out += " + ";
            print_rec(rhs, 1, out);
          }
          if (parens) out += ")";
          return;
        }
        case BinOp::Sub: {
          bool parens = parent_prec >= 1;
          if (parens) out += "(";
          print_rec(n.a, 0, out);
          out += " - ";
          print_rec(n.b, 1, out);
          if (parens) out += ")";
          return;
        }
        case BinOp::Mul: {
          bool parens = parent_prec >= 2;
          if (parens) out += "(";
          print_rec(n.a, 1, out);
          out += "*";
          print_rec(n.b, 2, out);
          if (parens) out += ")";
          return;
        }
        case BinOp::Div: {
          bool parens = parent_prec >= 2;
          if (parens) out += "(";
          print_rec(n.a, 1, out);
          out += "/";
          print_rec(n.b, 2, out);
          if (parens) out += ")";
          return;
        }
        case BinOp::Pow: {
          print_rec(n.a, 3, out);
          out += "^";
          // exponents are parenthesized unless a plain non-negative literal
          bool simple = false;
          if (auto num = n.b.number()) {
            if (num->exact && num->num >= 0 && num->den == 1) simple = true;
          }
          if (simple) {
            print_rec(n.b, 3, out);
          } else {
            out += "(";
            print_rec(n.b, 0, out);
            out += ")";
          }
          return;
        }
      }
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_rec(e, 0, out);
  return out;
}

}  // namespace dcsym
