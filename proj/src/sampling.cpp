#include "dcsym/sampling.hpp"

#include <cmath>

namespace dcsym {

void sample_valuation(const Expr& e, const SampleBox& box, Rng& rng, Valuation& out) {
  std::array<bool, kVarCount> present{};
  collect_free_vars(e, present);
  for (std::size_t i = 0; i < kVarCount; ++i) {
    if (!present[i]) continue;
    Var v = static_cast<Var>(i);
    auto it = box.vars.find(v);
    Range r = it != box.vars.end() ? it->second : box.var_default;
    out.set(v, rng.uniform(r.lo, r.hi));
  }
  for (const std::string& p : free_params(e)) {
    if (out.params.count(p)) continue;
    auto it = box.params.find(p);
    Range r = it != box.params.end() ? it->second : box.param_default;
    out.set(p, rng.uniform(r.lo, r.hi));
  }
}

ZeroTestReport zero_test(const Expr& e, const SampleBox& box, int samples, double tol,
                         std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("zero_test: samples must be >= 1");
  Rng rng(seed);
  ZeroTestReport rep;
  for (int i = 0; i < samples; ++i) {
    Valuation val;
    sample_valuation(e, box, rng, val);
    EvalScale es;
    try {
      es = eval_with_scale(e, val);
    } catch (const EvalError&) {
      ++rep.eval_errors;
      continue;
    }
    ++rep.evaluated;
    double rel = std::abs(es.value) / (1.0 + es.scale);
    rep.max_rel = std::max(rep.max_rel, rel);
    if (rel > tol) rep.is_zero = false;
  }
  if (rep.evaluated == 0) throw UndecidableOnBox("zero_test: undecidable on box (all samples failed)");
  return rep;
}

double max_relative_value(const Expr& e, const SampleBox& box, int samples, std::uint64_t seed) {
  ZeroTestReport rep = zero_test(e, box, samples, 1e300, seed);
  return rep.max_rel;
}

}  // namespace dcsym
