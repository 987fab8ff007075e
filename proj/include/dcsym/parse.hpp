#pragma once

// Recursive-descent parser for the expression grammar:
//   identifiers [a-zA-Z_][a-zA-Z0-9_]*, reserved variable/jet names,
//   decimal or rational literals, + - * / ^ with ^ right-associative,
//   the function set exp ln sqrt arctan sin cos tan sinh cosh tanh coth,
//   and `i` as the imaginary unit in complex mode.
// Parsed trees come back normalized; parse(to_string(e)) reproduces e.

#include <stdexcept>
#include <string>
#include <string_view>

#include "dcsym/expr.hpp"

namespace dcsym {

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at byte " + std::to_string(off)), offset(off) {}
};

struct ParseOptions {
  bool complex_mode = false;  // enables the literal `i`
};

Expr parse(std::string_view text, const ParseOptions& opts = {});

// Domain predicates for solution branches: a comparison `lhs OP rhs` with
// OP in {<, >, <=, >=, !=} between expressions that may also use abs(...),
// or conjunctions joined by `&`. Evaluates on real points.
class Predicate {
 public:
  Predicate() = default;
  static Predicate parse(std::string_view text);
  static Predicate always();

  bool eval(double t_val, double x_val) const;
  const std::string& text() const { return text_; }
  bool trivial() const { return clauses_.empty(); }

 private:
  struct Clause {
    Expr lhs, rhs;
    int op;  // 0 '<', 1 '>', 2 "<=", 3 ">=", 4 "!="
  };
  std::vector<Clause> clauses_;
  std::string text_;
};

}  // namespace dcsym
