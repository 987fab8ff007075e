#pragma once

// Symbolic expression core: immutable trees over a fixed jet-variable set,
// named parameters and exact-rational / complex constants. All operations
// are pure; expressions are cheap to share across threads.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dcsym {

// Base variables and the jet coordinates used by prolongation and
// total-derivative machinery. Jet symbols are independent variables.
enum class Var : unsigned char {
  t, x, u, v,
  u_t, u_x, u_xx, u_xxx, u_xxxx, u_tx, u_tt, u_txx,
  v_t, v_x, v_xx, v_xxx, v_xxxx, v_tx, v_tt, v_txx,
  count
};

constexpr std::size_t kVarCount = static_cast<std::size_t>(Var::count);

const char* var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

// Exact rational when possible, complex double otherwise. Rational
// arithmetic falls back to inexact on overflow.
struct Number {
  bool exact = true;
  long long num = 0;
  long long den = 1;
  std::complex<double> cval{0.0, 0.0};

  static Number rational(long long n, long long d = 1);
  static Number inexact(std::complex<double> z);

  std::complex<double> value() const;
  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;
  bool is_real() const;

  static Number add(const Number& a, const Number& b);
  static Number mul(const Number& a, const Number& b);
  static Number neg(const Number& a);
  // Exact only when base exact and exponent an integer of modest size.
  static std::optional<Number> pow(const Number& a, const Number& b);
};

int compare(const Number& a, const Number& b);

enum class UnOp : unsigned char { Neg, Exp, Ln, Sqrt, Arctan, Sin, Cos, Tan, Sinh, Cosh, Tanh, Coth };
enum class BinOp : unsigned char { Add, Sub, Mul, Div, Pow };

const char* unop_name(UnOp op);
std::optional<UnOp> unop_from_name(std::string_view name);

class Expr;
struct Node;

enum class Kind : unsigned char { Num, Param, Variable, Unary, Binary };

// Value-semantic handle to an immutable node. Default-constructed handles
// are empty and must be assigned before use.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  bool valid() const { return static_cast<bool>(node_); }

  const Node& node() const { return *node_; }
  const std::shared_ptr<const Node>& ptr() const { return node_; }

  Kind kind() const;
  bool is_number() const;
  bool is_zero() const;
  bool is_one() const;
  // Constant value when the node is a literal number.
  std::optional<Number> number() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind;
  Number num;         // Kind::Num
  std::string name;   // Kind::Param
  Var var = Var::t;   // Kind::Variable
  UnOp uop = UnOp::Neg;
  BinOp bop = BinOp::Add;
  Expr a, b;
};

// Leaf constructors.
Expr constant(long long n, long long d = 1);
Expr constant(double x);
Expr constant(std::complex<double> z);
inline Expr constant(int n) { return constant(static_cast<long long>(n)); }
inline Expr constant(int n, int d) { return constant(static_cast<long long>(n), static_cast<long long>(d)); }
Expr number(const Number& n);
Expr param(std::string name);
Expr variable(Var v);

// Normalizing constructors. Built expressions are always in canonical form:
// constants folded, sums/products flattened and sorted, neg/sub/div/sqrt
// rewritten through mul/add/pow.
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr neg(const Expr& a);
Expr unary(UnOp op, const Expr& a);

inline Expr exp(const Expr& a) { return unary(UnOp::Exp, a); }
inline Expr ln(const Expr& a) { return unary(UnOp::Ln, a); }
inline Expr sqrt(const Expr& a) { return unary(UnOp::Sqrt, a); }
inline Expr arctan(const Expr& a) { return unary(UnOp::Arctan, a); }
inline Expr sin(const Expr& a) { return unary(UnOp::Sin, a); }
inline Expr cos(const Expr& a) { return unary(UnOp::Cos, a); }
inline Expr tan(const Expr& a) { return unary(UnOp::Tan, a); }
inline Expr sinh(const Expr& a) { return unary(UnOp::Sinh, a); }
inline Expr cosh(const Expr& a) { return unary(UnOp::Cosh, a); }
inline Expr tanh(const Expr& a) { return unary(UnOp::Tanh, a); }
inline Expr coth(const Expr& a) { return unary(UnOp::Coth, a); }

inline Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }

// Total order on trees; defines canonical child ordering.
int compare(const Expr& a, const Expr& b);
bool structural_equal(const Expr& a, const Expr& b);

// Full re-normalization (idempotent; the normalizing constructors keep
// expressions canonical already, this re-canonicalizes arbitrary trees).
Expr normalize(const Expr& e);

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binding of variables and parameters to complex scalars.
struct Valuation {
  std::array<std::complex<double>, kVarCount> vars{};
  std::array<bool, kVarCount> bound{};
  std::map<std::string, std::complex<double>, std::less<>> params;

  void set(Var v, std::complex<double> z) {
    vars[static_cast<std::size_t>(v)] = z;
    bound[static_cast<std::size_t>(v)] = true;
  }
  void set(const std::string& p, std::complex<double> z) { params[p] = z; }
};

std::complex<double> eval(const Expr& e, const Valuation& val);

// Evaluation that also reports the largest sub-term magnitude, used as the
// cancellation guard in relative-tolerance zero tests.
struct EvalScale {
  std::complex<double> value;
  double scale = 0.0;
};
EvalScale eval_with_scale(const Expr& e, const Valuation& val);

// Partial derivative; jet coordinates are independent symbols.
Expr diff(const Expr& e, Var v);

// Total derivative with respect to t or x on the jet space
// (u -> u_x, u_x -> u_xx, ... raising). Throws when a required higher
// jet coordinate is not part of the variable set.
Expr total_derivative(const Expr& e, Var wrt);

// Simultaneous substitution followed by normalization.
struct Subst {
  std::map<Var, Expr> vars;
  std::map<std::string, Expr, std::less<>> params;
};
Expr substitute(const Expr& e, const Subst& s);

void collect_free_vars(const Expr& e, std::array<bool, kVarCount>& out);
std::set<std::string> free_params(const Expr& e);
bool depends_on(const Expr& e, Var v);

std::string to_string(const Expr& e);

}  // namespace dcsym
