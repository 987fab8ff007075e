#pragma once

// The three equivalence groups acting on diffusion-convection equations:
//
//   point group:      t~ = e4 t + e1, x~ = e5 x + e4 e7 t + e2, u~ = e6 u + e3,
//                     d~ = e5^2/e4 d, k~ = e5/e4 k - e7
//   conserved group:  same kinematics plus K~ = e5 e6/e4 K + e7 u~ + e8
//   potential group:  t~ = e1 t + e2, x~ = e1' x + e2' v + e3' t + e4',
//                     v~ = e1'' x + e2'' v + e3'' t + e4'',
//                     u~ = (e1'' + e2'' u)/(e1' + e2' u),
//                     d~ = (e1' + e2' u)^2 d / e1,
//                     K~ = (e1' e2'' - e2' e1'')/(e1' + e2' u) K/e1
//                          - e3''/e1 + e3'/e1 u~
//
// The x-drift coefficient carries the extra e4 factor so the displayed
// actions on (d, k, K) hold verbatim and composition closes in parameters.

#include <complex>

#include "dcsym/model.hpp"

namespace dcsym {

struct PointEquivTransform {
  double e1 = 0, e2 = 0, e3 = 0;  // translations of t, x, u
  double e4 = 1, e5 = 1, e6 = 1;  // scalings, e4*e5*e6 != 0
  double e7 = 0;                  // Galilean drift

  static PointEquivTransform identity() { return {}; }
  void check() const;
};

struct ConservedEquivTransform {
  double e1 = 0, e2 = 0, e3 = 0;
  double e4 = 1, e5 = 1, e6 = 1;
  double e7 = 0, e8 = 0;

  static ConservedEquivTransform identity() { return {}; }
  PointEquivTransform point_part() const { return {e1, e2, e3, e4, e5, e6, e7}; }
  void check() const;
};

struct PotentialEquivTransform {
  using C = std::complex<double>;
  C e1{1, 0}, e2{0, 0};
  C ep1{1, 0}, ep2{0, 0}, ep3{0, 0}, ep4{0, 0};      // x~ row
  C epp1{0, 0}, epp2{1, 0}, epp3{0, 0}, epp4{0, 0};  // v~ row

  static PotentialEquivTransform identity() { return {}; }
  bool is_real() const;
  void check() const;  // e1 (ep1 epp2 - ep2 epp1) != 0
};

DcEquation apply_point(const PointEquivTransform& T, const DcEquation& eq);
DcEquation apply_conserved(const ConservedEquivTransform& T, const DcEquation& eq);
DcEquation apply_potential(const PotentialEquivTransform& T, const DcEquation& eq);

PointEquivTransform compose(const PointEquivTransform& T1, const PointEquivTransform& T2);
PointEquivTransform invert(const PointEquivTransform& T);
ConservedEquivTransform compose(const ConservedEquivTransform& T1, const ConservedEquivTransform& T2);
ConservedEquivTransform invert(const ConservedEquivTransform& T);
PotentialEquivTransform compose(const PotentialEquivTransform& T1, const PotentialEquivTransform& T2);
PotentialEquivTransform invert(const PotentialEquivTransform& T);

// x~ = x + eps v, u~ = u/(1 + eps u): one-parameter purely potential family.
PotentialEquivTransform purely_potential(double eps);
// x~ = v, v~ = x, u~ = 1/u: the hodograph involution.
PotentialEquivTransform hodograph();

// Conserved transform realized as a potential one (same (d, K) action).
PotentialEquivTransform embed_conserved(const ConservedEquivTransform& T);

// t~ = -4t, x~ = -2x + 2iv, v~ = 2x + 2iv: reduces the arctan cases over C.
PotentialEquivTransform complex_reduction_27();

// Verifies that the complex map takes d = e^(mu arctan u)/(u^2+1),
// K = sqrt(u^2+1) e^(nu arctan u) to d~ ~ u~^(mu') , K~ ~ u~^(nu'+1) with
// mu' = -i mu/2 - 1, nu' = -i nu/2 - 1/2, sampling u on a real box.
struct ComplexReductionReport {
  std::complex<double> mu_prime, nu_prime;
  double max_d_err = 0, max_K_err = 0;
  bool pass = false;
};
ComplexReductionReport verify_complex_reduction_27(double mu, double nu, int samples = 50,
                                                   double tol = 1e-8);

// Exponential-as-power-limit check: sup |(1+u/nu)^(mu'*nu) - e^(mu'*u)| on
// u in [-1, 1] per nu in nu_seq.
struct LimitReport {
  std::vector<double> nu;
  std::vector<double> sup_error;
  std::vector<double> taylor_estimate;  // e^(mu' u) mu' u^2 / (2 nu) bound
  bool decreasing = false;
};
LimitReport note3_limit_check(double mu_prime, const std::vector<double>& nu_seq, int grid = 2001);

}  // namespace dcsym
