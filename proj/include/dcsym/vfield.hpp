#pragma once

// Vector fields on (t, x, u[, v]), second prolongation, invariance residuals
// for the scalar class, the potential system and the potential equation,
// commutators, closure checks and adjoint actions under point changes of
// variables.

#include <optional>
#include <vector>

#include "dcsym/equiv.hpp"
#include "dcsym/model.hpp"

namespace dcsym {

// Which components an infinite-dimensional family occupies (coefficients
// depend on an arbitrary heat-equation solution).
enum class FunctionalKind : unsigned char { none, h_tx, phi_tv };

struct VectorField {
  Expr tau, xi, eta;         // coefficients of d/dt, d/dx, d/du
  std::optional<Expr> zeta;  // d/dv coefficient for fields on (t,x,u,v)
  FunctionalKind functional = FunctionalKind::none;

  static VectorField txu(Expr tau, Expr xi, Expr eta);
  static VectorField txuv(Expr tau, Expr xi, Expr eta, Expr zeta);
};

// Applies X as a derivation to a function of (t, x, u, v).
Expr apply_field(const VectorField& X, const Expr& f);

// Substitutes a concrete heat solution for the functional parameter
// symbols h/h_x/h_t (argument (t,x)) or phi/phi_v/phi_t (argument (t,v)).
VectorField instantiate_h(const VectorField& X, const Expr& h_of_tx);
VectorField instantiate_phi(const VectorField& X, const Expr& phi_of_tv);

// Standard heat-solution instantiations used for the infinite families.
std::vector<Expr> heat_solutions_tx();
std::vector<Expr> heat_solutions_tv();

// Max relative invariance residual of the second prolongation of X on the
// scalar equation, over `samples` jet points. Fields must not carry an
// uninstantiated functional parameter.
double invariance_residual_scalar(const VectorField& X, const DcEquation& eq, int samples,
                                  std::uint64_t seed, const SampleBox& box);

// First prolongation on the potential system (both residuals, on-manifold).
double invariance_residual_system(const VectorField& X, const DcEquation& eq, int samples,
                                  std::uint64_t seed, const SampleBox& box);

// Second prolongation on the potential equation for v; uses tau, xi, zeta.
double invariance_residual_potential(const VectorField& X, const DcEquation& eq, int samples,
                                     std::uint64_t seed, const SampleBox& box);

VectorField commutator(const VectorField& X, const VectorField& Y);

struct ClosureReport {
  bool ok = true;
  double worst_fit = 0.0;       // worst span-fit residual over finite pairs
  double worst_invariance = 0;  // worst invariance residual over family pairs
  int pairs_fitted = 0;
  int pairs_invariance_checked = 0;
};

// For finite algebras: every [Xi, Xj] must lie in the numeric span of the
// basis (least-squares fit at sample points). Pairs involving functional
// families are instead checked to remain symmetries of the system.
ClosureReport closure_check(const std::vector<VectorField>& basis, const DcEquation& eq,
                            bool system_mode, std::uint64_t seed, const SampleBox& box,
                            double tol = 1e-8);

// Invertible change of variables on (t, x, u[, v]). Inverse expressions are
// written in the new coordinates reusing the same variable symbols.
struct PointChangeOfVariables {
  Expr fwd_t, fwd_x, fwd_u;
  std::optional<Expr> fwd_v;
  Expr inv_t, inv_x, inv_u;
  std::optional<Expr> inv_v;

  // numeric sanity: forward(inverse) == id on the box
  void validate(const SampleBox& box, int samples = 25, std::uint64_t seed = 5150) const;
};

// t~ = t, x~ = e^x, u~ = e^(-x) u (optionally prolonged to v~ = v).
PointChangeOfVariables transform3(bool prolong_to_v = false);

// Coordinate realization of a potential transform (complex entries allowed).
PointChangeOfVariables pet_change(const PotentialEquivTransform& T);

PointChangeOfVariables identity_change(bool with_v);

// Pushforward of the vector field: components X(fwd_j) expressed in the new
// coordinates. Functional parameters must be instantiated beforehand.
VectorField adjoint_action(const PointChangeOfVariables& C, const VectorField& X);

VectorField project_to_txv(const VectorField& X);
std::optional<VectorField> project_to_txu(const VectorField& X);

// Structural equality of fields after normalization, coefficient by
// coefficient (numeric zero test on differences).
bool fields_equal(const VectorField& A, const VectorField& B, const SampleBox& box,
                  double tol = 1e-9);

// Coefficients of Z in span(basis) fitted at sample points; nullopt when the
// residual exceeds tol.
std::optional<std::vector<std::complex<double>>> span_fit(const std::vector<VectorField>& basis,
                                                          const VectorField& Z,
                                                          const SampleBox& box, std::uint64_t seed,
                                                          double tol = 1e-8);

}  // namespace dcsym
