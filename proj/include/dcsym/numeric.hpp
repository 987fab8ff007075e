#pragma once

// Small numeric toolbox: seeded RNG, dense least squares, smallest-eigenpair
// fits, quadrature, RK4 with dense output, finite-difference stencils,
// bracketed root finding and 1-d minimization.

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace dcsym {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
  }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Least squares min ||A c - b|| via normal equations; A is m x n, m >= n.
// Returns coefficients; residual_out gets max |A c - b| if non-null.
template <typename Scalar>
std::vector<Scalar> least_squares(const std::vector<std::vector<Scalar>>& A,
                                  const std::vector<Scalar>& b, double* residual_out = nullptr);

// Unit vector minimizing ||A c|| (smallest right singular vector), via Jacobi
// eigen-decomposition of A^T A. Real only.
std::vector<double> min_nullspace(const std::vector<std::vector<double>>& A);

// Composite 16-point Gauss-Legendre on [a, b] with n segments.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int segments);

// Adaptive Simpson to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol);

// Cumulative quadrature cache along one axis: V(x) = integral from x0.
// The default mode integrates the tail of the active cell exactly at every
// query; hermite mode interpolates between nodes using the stored integrand
// values (O(1) per query, integrand never re-evaluated).
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> f, double x0, double lo, double hi, int cells,
                     bool hermite = false);
  double operator()(double x) const;

 private:
  std::function<double(double)> f_;
  double lo_ = 0, hi_ = 0, x0_ = 0, h_ = 0;
  bool hermite_ = false;
  std::vector<double> nodes_;  // cumulative values at grid nodes relative to x0
  std::vector<double> fvals_;  // integrand at nodes (hermite mode)
};

// RK4 integration of y' = f(x, y) from (x0, y0); dense output by cubic
// Hermite interpolation between stored steps.
class OdeSolution {
 public:
  double operator()(double x) const;
  double xmin() const { return xs_.front(); }
  double xmax() const { return xs_.back(); }

  std::vector<double> xs_, ys_, fs_;
};
OdeSolution integrate_ode(const std::function<double(double, double)>& f, double x0, double y0,
                          double xlo, double xhi, int steps);

// 4th-order central first/second derivative of a callable.
double fd_d1(const std::function<double(double)>& f, double x, double h);
double fd_d2(const std::function<double(double)>& f, double x, double h);

// Root of a continuous monotone function on [lo, hi] (f(lo), f(hi) opposite
// signs); bisection with secant acceleration to tolerance in x.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double xtol);

// Same with a supplied derivative: safeguarded Newton.
double find_root_newton(const std::function<double(double)>& f,
                        const std::function<double(double)>& fprime, double lo, double hi,
                        double xtol);

// Golden-section minimization of f on [lo, hi].
double minimize_golden(const std::function<double(double)>& f, double lo, double hi, double xtol);

}  // namespace dcsym
