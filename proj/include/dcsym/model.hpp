#pragma once

// Equation classes: u_t = (d(u) u_x)_x + k(u) u_x, its conserved form
// u_t = (d u_x - K)_x with K_u = -k, the potential system v_x = u,
// v_t = d u_x - K, and the scalar potential equation for v.

#include <optional>

#include "dcsym/expr.hpp"
#include "dcsym/sampling.hpp"

namespace dcsym {

struct DcEquation {
  Expr d;
  std::optional<Expr> k;  // convection coefficient
  std::optional<Expr> K;  // conserved-form flux part, K_u = -k

  static DcEquation from_dk(Expr d, Expr k);
  static DcEquation from_dK(Expr d, Expr K);
};

// k derived from K when absent (and vice versa through the primitive table).
Expr convection_k(const DcEquation& eq);

// Antiderivative over the primitive table: sums of c*u^p, c*(u+a)^p,
// c*e^(p*u), c*ln(u), c*u^p*e^(c2/u) shapes as they occur in the tables.
// Throws std::runtime_error when outside the table.
Expr antiderivative_in_u(const Expr& f);

// Fills K = -int k du with zero additive constant.
DcEquation K_from_k(const DcEquation& eq);

// u_t - d u_xx - d_u u_x^2 - k u_x
Expr scalar_residual(const DcEquation& eq);

struct PotentialSystem {
  Expr first;   // v_x - u
  Expr second;  // v_t - d u_x + K
  DcEquation eq;
};
PotentialSystem potential_system(const DcEquation& eq);

struct PotentialEquation {
  Expr residual;  // v_t - d(v_x) v_xx + K(v_x)
  DcEquation eq;
};
PotentialEquation potential_equation(const DcEquation& eq);

// Checks d not identically zero and K_u = -k when both present.
void validate(const DcEquation& eq, const SampleBox& box);

// Substitutes the equation and its differential consequences for u_t, u_tx,
// u_txx and u_tt, leaving an expression over (t, x, u, u_x, ..., u_xxxx).
Expr eliminate_u_t_derivatives(const Expr& e, const DcEquation& eq);

// Same for the potential equation: v_t, v_tx, v_txx, v_tt from
// v_t = d(v_x) v_xx - K(v_x).
Expr eliminate_v_t_derivatives(const Expr& e, const DcEquation& eq);

}  // namespace dcsym
