#include "dcsym/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace dcsym {

namespace {

template <typename Scalar>
std::vector<Scalar> solve_linear(std::vector<std::vector<Scalar>> M, std::vector<Scalar> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(M[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(M[r][col]) > best) {
        best = std::abs(M[r][col]);
        pivot = r;
      }
    }
    if (best < 1e-14) throw std::runtime_error("solve_linear: singular system");
    std::swap(M[col], M[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      Scalar factor = M[r][col] / M[col][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= factor * M[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<Scalar> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / M[i][i];
  return out;
}

template <typename Scalar>
Scalar conj_of(Scalar x) {
  if constexpr (std::is_same_v<Scalar, std::complex<double>>)
    return std::conj(x);
  else
    return x;
}

}  // namespace

template <typename Scalar>
std::vector<Scalar> least_squares(const std::vector<std::vector<Scalar>>& A,
                                  const std::vector<Scalar>& b, double* residual_out) {
  const std::size_t m = A.size();
  if (m == 0) throw std::invalid_argument("least_squares: empty system");
  const std::size_t n = A[0].size();
  std::vector<std::vector<Scalar>> M(n, std::vector<Scalar>(n, Scalar{}));
  std::vector<Scalar> rhs(n, Scalar{});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rhs[j] += conj_of(A[i][j]) * b[i];
      for (std::size_t k = 0; k < n; ++k) M[j][k] += conj_of(A[i][j]) * A[i][k];
    }
  }
  // Tikhonov whisper keeps near-rank-deficient fits stable
  for (std::size_t j = 0; j < n; ++j) M[j][j] += Scalar(1e-13);
  std::vector<Scalar> c = solve_linear(std::move(M), std::move(rhs));
  if (residual_out) {
    double worst = 0;
    for (std::size_t i = 0; i < m; ++i) {
      Scalar acc{};
      for (std::size_t j = 0; j < n; ++j) acc += A[i][j] * c[j];
      worst = std::max(worst, std::abs(acc - b[i]));
    }
    *residual_out = worst;
  }
  return c;
}

template std::vector<double> least_squares<double>(const std::vector<std::vector<double>>&,
                                                   const std::vector<double>&, double*);
template std::vector<std::complex<double>> least_squares<std::complex<double>>(
    const std::vector<std::vector<std::complex<double>>>&, const std::vector<std::complex<double>>&,
    double*);

std::vector<double> min_nullspace(const std::vector<std::vector<double>>& A) {
  const std::size_t m = A.size();
  if (m == 0) throw std::invalid_argument("min_nullspace: empty system");
  const std::size_t n = A[0].size();
  std::vector<std::vector<double>> S(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) S[j][k] += A[i][j] * A[i][k];

  // Jacobi rotations on S; V accumulates eigenvectors.
  std::vector<std::vector<double>> V(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) V[i][i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += S[p][q] * S[p][q];
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(S[p][q]) < 1e-30) continue;
        double theta = (S[q][q] - S[p][p]) / (2.0 * S[p][q]);
        double sign = theta >= 0 ? 1.0 : -1.0;
        double tval = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(tval * tval + 1.0);
        double s = tval * c;
        for (std::size_t k = 0; k < n; ++k) {
          double skp = S[k][p], skq = S[k][q];
          S[k][p] = c * skp - s * skq;
          S[k][q] = s * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double spk = S[p][k], sqk = S[q][k];
          S[p][k] = c * spk - s * sqk;
          S[q][k] = s * spk + c * sqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = V[k][p], vkq = V[k][q];
          V[k][p] = c * vkp - s * vkq;
          V[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (S[i][i] < S[best][best]) best = i;
  std::vector<double> out(n);
  double norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = V[i][best];
    norm += out[i] * out[i];
  }
  norm = std::sqrt(norm);
  for (double& x : out) x /= norm;
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
const double kGlX[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                        0.9445750230732326, 0.9894009349916499};
const double kGlW[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                        0.0622535239386479, 0.0271524594117541};

double gl16(const std::function<double(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 8; ++i)
    acc += kGlW[i] * (f(mid + half * kGlX[i]) + f(mid - half * kGlX[i]));
  return acc * half;
}

const double kGl8X[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                         0.9602898564975363};
const double kGl8W[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                         0.1012285362903763};

// cheap 8-point rule for the short cells of cumulative caches
double gl8(const std::function<double(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 4; ++i)
    acc += kGl8W[i] * (f(mid + half * kGl8X[i]) + f(mid - half * kGl8X[i]));
  return acc * half;
}

}  // namespace

double integrate_gl(const std::function<double(double)>& f, double a, double b, int segments) {
  if (segments < 1) segments = 1;
  double h = (b - a) / segments, acc = 0;
  for (int i = 0; i < segments; ++i) acc += gl16(f, a + i * h, a + (i + 1) * h);
  return acc;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_rec(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         adaptive_rec(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double x0, double lo,
                                       double hi, int cells, bool hermite)
    : f_(std::move(f)), lo_(lo), hi_(hi), x0_(x0), hermite_(hermite) {
  if (cells < 2) cells = 2;
  h_ = (hi - lo) / cells;
  nodes_.resize(cells + 1);
  // cumulative from lo, then rebase so the value at x0 is zero
  nodes_[0] = 0.0;
  for (int i = 0; i < cells; ++i) nodes_[i + 1] = nodes_[i] + gl8(f_, lo + i * h_, lo + (i + 1) * h_);
  int cell = std::clamp(static_cast<int>((x0 - lo_) / h_), 0, static_cast<int>(nodes_.size()) - 2);
  double base = nodes_[cell] + gl8(f_, lo_ + cell * h_, x0);
  for (double& v : nodes_) v -= base;
  if (hermite_) {
    fvals_.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) fvals_[i] = f_(lo + i * h_);
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (x < lo_ - 1e-12 || x > hi_ + 1e-12) throw std::runtime_error("CumulativeIntegral: out of range");
  int cell = std::clamp(static_cast<int>((x - lo_) / h_), 0, static_cast<int>(nodes_.size()) - 2);
  if (!hermite_) return nodes_[cell] + gl8(f_, lo_ + cell * h_, x);
  // cubic Hermite on the cell; V' = f at the nodes is known exactly
  double sfrac = (x - (lo_ + cell * h_)) / h_;
  double y0 = nodes_[cell], y1 = nodes_[cell + 1];
  double d0 = fvals_[cell] * h_, d1 = fvals_[cell + 1] * h_;
  double s2 = sfrac * sfrac, s3 = s2 * sfrac;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + sfrac) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

// ---------------------------------------------------------------------------
// ODE

double OdeSolution::operator()(double x) const {
  if (x < xs_.front() - 1e-12 || x > xs_.back() + 1e-12)
    throw std::runtime_error("OdeSolution: query outside integrated range");
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  if (i >= xs_.size() - 1) i = xs_.size() - 2;
  double h = xs_[i + 1] - xs_[i];
  double s = (x - xs_[i]) / h;
  double y0 = ys_[i], y1 = ys_[i + 1], d0 = fs_[i] * h, d1 = fs_[i + 1] * h;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

OdeSolution integrate_ode(const std::function<double(double, double)>& f, double x0, double y0,
                          double xlo, double xhi, int steps) {
  OdeSolution sol;
  auto march = [&](double from, double to, std::vector<double>& xs, std::vector<double>& ys) {
    int n = std::max(2, static_cast<int>(steps * std::abs(to - from) / std::max(1e-12, xhi - xlo)));
    double h = (to - from) / n;
    double x = from, y = y0;
    // y0 refers to value at x0; caller arranges marching from x0
    xs.push_back(x);
    ys.push_back(y);
    for (int i = 0; i < n; ++i) {
      double k1 = f(x, y);
      double k2 = f(x + h / 2, y + h / 2 * k1);
      double k3 = f(x + h / 2, y + h / 2 * k2);
      double k4 = f(x + h, y + h * k3);
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      x += h;
      xs.push_back(x);
      ys.push_back(y);
    }
  };
  std::vector<double> xs_up, ys_up, xs_dn, ys_dn;
  if (xhi > x0) march(x0, xhi, xs_up, ys_up);
  if (xlo < x0) march(x0, xlo, xs_dn, ys_dn);
  // stitch: descending branch reversed, then ascending
  for (std::size_t i = xs_dn.size(); i-- > 1;) {
    sol.xs_.push_back(xs_dn[i]);
    sol.ys_.push_back(ys_dn[i]);
  }
  if (!xs_up.empty()) {
    for (std::size_t i = 0; i < xs_up.size(); ++i) {
      sol.xs_.push_back(xs_up[i]);
      sol.ys_.push_back(ys_up[i]);
    }
  } else {
    sol.xs_.push_back(x0);
    sol.ys_.push_back(y0);
  }
  sol.fs_.resize(sol.xs_.size());
  for (std::size_t i = 0; i < sol.xs_.size(); ++i) sol.fs_[i] = f(sol.xs_[i], sol.ys_[i]);
  return sol;
}

// ---------------------------------------------------------------------------
// FD / root / minimize

double fd_d1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd_d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          double xtol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0)) throw std::runtime_error("find_root_monotone: no sign change");
  double prev = lo;
  for (int iter = 0; iter < 200 && hi - lo > xtol; ++iter) {
    // secant candidate, safeguarded by bisection
    double mid = 0.5 * (lo + hi);
    double sec = lo - flo * (hi - lo) / (fhi - flo);
    double cand = (sec > lo + 0.1 * (hi - lo) && sec < hi - 0.1 * (hi - lo)) ? sec : mid;
    double fc = f(cand);
    if (fc == 0) return cand;
    if (std::abs(cand - prev) < xtol) return cand;
    prev = cand;
    if ((fc < 0) == (flo < 0)) {
      lo = cand;
      flo = fc;
    } else {
      hi = cand;
      fhi = fc;
    }
  }
  return 0.5 * (lo + hi);
}

double find_root_newton(const std::function<double(double)>& f,
                        const std::function<double(double)>& fprime, double lo, double hi,
                        double xtol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0)) throw std::runtime_error("find_root_newton: no sign change");
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 80; ++iter) {
    double fx = f(x);
    if (fx == 0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    double dp = fprime(x);
    double cand = std::abs(dp) > 1e-300 ? x - fx / dp : 0.5 * (lo + hi);
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    // Newton step length certifies proximity for smooth monotone targets
    if (std::abs(cand - x) < xtol) return cand;
    x = cand;
    if (hi - lo < xtol) break;
  }
  return x;
}

double minimize_golden(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace dcsym
