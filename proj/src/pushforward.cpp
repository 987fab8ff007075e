#include "dcsym/pushforward.hpp"

#include <cmath>

namespace dcsym {

PushforwardReport pushforward_residual(const PointChangeOfVariables& C,
                                       const DcEquation& source_eq, const Expr& target_residual,
                                       int samples, std::uint64_t seed, const SampleBox& box) {
  // On the graph of a source solution, T = fwd_t, X = fwd_x, U = fwd_u are
  // functions of (t, x); solving the chain-rule system
  //   U_t = u~_t D_t T + u~_x D_t X,   U_x = u~_t D_x T + u~_x D_x X
  // gives the first-order image jets, and repeating with W = u~_x gives
  // u~_xx. All expressions live over source jets with t-derivatives
  // eliminated through the source equation.
  Expr DtT = total_derivative(C.fwd_t, Var::t);
  Expr DxT = total_derivative(C.fwd_t, Var::x);
  Expr DtX = total_derivative(C.fwd_x, Var::t);
  Expr DxX = total_derivative(C.fwd_x, Var::x);
  Expr DtU = total_derivative(C.fwd_u, Var::t);
  Expr DxU = total_derivative(C.fwd_u, Var::x);
  Expr det = sub(mul(DtT, DxX), mul(DtX, DxT));

  Expr ut_img = div(sub(mul(DxX, DtU), mul(DtX, DxU)), det);
  Expr ux_img = div(sub(mul(DtT, DxU), mul(DxT, DtU)), det);

  Expr W = ux_img;
  Expr DtW = total_derivative(W, Var::t);
  Expr DxW = total_derivative(W, Var::x);
  Expr uxx_img = div(sub(mul(DtT, DxW), mul(DxT, DtW)), det);

  Subst into_target;
  into_target.vars[Var::t] = C.fwd_t;
  into_target.vars[Var::x] = C.fwd_x;
  into_target.vars[Var::u] = C.fwd_u;
  into_target.vars[Var::u_t] = ut_img;
  into_target.vars[Var::u_x] = ux_img;
  into_target.vars[Var::u_xx] = uxx_img;
  Expr pulled = substitute(target_residual, into_target);
  Expr on_manifold = eliminate_u_t_derivatives(pulled, source_eq);

  SampleBox jets = box;
  for (Var v : {Var::u_x, Var::u_xx, Var::u_xxx, Var::u_xxxx})
    if (!jets.vars.count(v)) jets.set(v, -2.0, 2.0);

  Rng rng(seed);
  PushforwardReport rep;
  Expr det_elim = eliminate_u_t_derivatives(det, source_eq);
  for (int i = 0; i < samples; ++i) {
    Valuation val;
    sample_valuation(on_manifold, jets, rng, val);
    sample_valuation(det_elim, jets, rng, val);
    try {
      auto dv = eval(det_elim, val);
      if (std::abs(dv) < 1e-8) {
        ++rep.skipped;
        continue;
      }
      EvalScale es = eval_with_scale(on_manifold, val);
      rep.max_rel_residual = std::max(rep.max_rel_residual, std::abs(es.value) / (1.0 + es.scale));
      ++rep.points;
    } catch (const EvalError&) {
      ++rep.skipped;
    }
  }
  if (rep.points == 0) throw UndecidableOnBox("pushforward: box exhausted by singularities");
  return rep;
}

}  // namespace dcsym
