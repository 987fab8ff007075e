#pragma once

// Randomized sampling of valuations over boxes and the probabilistic zero
// oracle used for every semantic-equality check in the engine.

#include <map>
#include <string>

#include "dcsym/expr.hpp"
#include "dcsym/numeric.hpp"

namespace dcsym {

struct Range {
  double lo = 0.3;
  double hi = 2.7;
};

// Per-symbol sampling ranges. Variables default to [0.3, 2.7], parameters
// to [-3, 3]; callers shrink or move ranges away from singular loci.
struct SampleBox {
  std::map<Var, Range> vars;
  std::map<std::string, Range, std::less<>> params;
  Range var_default{0.3, 2.7};
  Range param_default{-3.0, 3.0};

  SampleBox& set(Var v, double lo, double hi) {
    vars[v] = {lo, hi};
    return *this;
  }
  SampleBox& set(const std::string& p, double lo, double hi) {
    params[p] = {lo, hi};
    return *this;
  }
};

// Draws values for every free symbol of `e` (merged into `out`).
void sample_valuation(const Expr& e, const SampleBox& box, Rng& rng, Valuation& out);

struct ZeroTestReport {
  bool is_zero = true;
  double max_rel = 0.0;   // max |value| / (1 + scale)
  int evaluated = 0;
  int eval_errors = 0;
};

// True iff |eval(e)| <= tol * (1 + scale) at every sample, scale being the
// largest sub-term magnitude (guards cancellation). Throws UndecidableOnBox
// when every sample hits an evaluation error.
struct UndecidableOnBox : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ZeroTestReport zero_test(const Expr& e, const SampleBox& box, int samples, double tol,
                         std::uint64_t seed);

inline bool is_zero_numeric(const Expr& e, const SampleBox& box, int samples = 100,
                            double tol = 1e-9, std::uint64_t seed = 20240601) {
  return zero_test(e, box, samples, tol, seed).is_zero;
}

// Max of |eval(e)| / (1 + scale) over samples; eval errors are skipped but
// at least one sample must succeed.
double max_relative_value(const Expr& e, const SampleBox& box, int samples, std::uint64_t seed);

}  // namespace dcsym
