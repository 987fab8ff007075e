#pragma once

// Numeric validation of arbitrary point changes of variables on second-order
// evolution residuals: pushes jets through the change by total
// differentiation + Jacobian inversion and evaluates the target residual at
// the image points.

#include "dcsym/vfield.hpp"

namespace dcsym {

struct PushforwardReport {
  double max_rel_residual = 0.0;
  int points = 0;
  int skipped = 0;  // singular Jacobian or evaluation failure
  bool pass(double tol = 1e-8) const { return points > 0 && max_rel_residual < tol; }
};

// source_eq supplies the elimination of t-derivatives; target_residual is a
// scalar second-order evolution residual in (t, x, u, u_t, u_x, u_xx).
PushforwardReport pushforward_residual(const PointChangeOfVariables& C,
                                       const DcEquation& source_eq, const Expr& target_residual,
                                       int samples, std::uint64_t seed, const SampleBox& box);

}  // namespace dcsym
