#include "dcsym/chain.hpp"

#include <cmath>

namespace dcsym {

namespace {

double equation_equality_residual(const DcEquation& a, const DcEquation& b) {
  SampleBox box;
  box.set(Var::u, 0.35, 2.6);
  double r1 = zero_test(sub(a.d, b.d), box, 60, 1e300, 31).max_rel;
  double r2 = zero_test(sub(*a.K, *b.K), box, 60, 1e300, 32).max_rel;
  return std::max(r1, r2);
}

}  // namespace

ChainReport run_linearization_chain(bool with_complex, int grid_n) {
  ChainReport rep;
  auto stage = [&rep](std::string name, double residual, double tol) {
    rep.stages.push_back({std::move(name), residual, tol, residual < tol});
  };

  // hodograph links as exact (d, K) equalities
  {
    auto c29 = DcEquation::from_dK(parse("u^(-2)"), parse("0"));
    auto c212 = DcEquation::from_dK(parse("1"), parse("0"));
    stage("2.9 <-> 2.12 via hodograph", equation_equality_residual(apply_potential(hodograph(), c29), c212),
          1e-9);
    auto c210 = DcEquation::from_dK(parse("u^(-2)"), parse("u^(-1)"));
    auto c211 = DcEquation::from_dK(parse("1"), parse("-u^2"));
    stage("2.10 <-> 2.11 via hodograph",
          equation_equality_residual(apply_potential(hodograph(), c210), c211), 1e-9);
  }

  // 1.7b -> 1.7a (mu = -2) by jet pushforward through x~ = e^x
  {
    auto src = DcEquation::from_dk(parse("u^(-2)"), parse("u^(-2)"));
    auto dst = DcEquation::from_dk(parse("u^(-2)"), parse("0"));
    SampleBox box;
    box.set(Var::u, 0.4, 2.2).set(Var::x, 0.2, 1.5);
    auto pf = pushforward_residual(transform3(false), src, scalar_residual(dst), 200, 77, box);
    stage("1.7b -> 1.7a(mu=-2) via transformation (3)", pf.max_rel_residual, 1e-8);
  }

  // end-to-end solution transport: a Burgers-type solution of case 2.11's
  // scalar equation becomes a caloric function
  {
    auto eq211 = DcEquation::from_dK(parse("1"), parse("-u^2"));
    auto eq17b = DcEquation::from_dk(parse("u^(-2)"), parse("u^(-2)"));
    auto eq29 = DcEquation::from_dK(parse("u^(-2)"), parse("0"));
    auto heat = DcEquation::from_dk(parse("1"), parse("0"));

    Expr uB = parse("exp(x+t)/(1+exp(x+t))");
    SolutionField fB;
    fB.closed_form = uB;
    fB.u = [uB](double t, double x) {
      Valuation val;
      val.set(Var::t, t);
      val.set(Var::x, x);
      return eval(uB, val).real();
    };
    GridSpec g0{0.2, 1.0, -1.0, 1.0, grid_n, grid_n};
    stage("Burgers seed solves case 2.11 scalar", verify_closed_form(eq211, uB, g0), 1e-10);

    PotentialLift lift1(eq211, fB, g0);
    stage("potential lift on 2.11", lift1.residual(), 1e-9);

    auto shrink = [](GridSpec g, double dt, double dx, int n) {
      g.t0 += dt;
      g.t1 -= dt;
      g.x0 += dx;
      g.x1 -= dx;
      g.nt = n;
      g.nx = n;
      return g;
    };

    auto img1 = hodograph_on_solution(eq211, fB, g0, /*fast=*/true);
    GridSpec g1 = shrink(img1.grid, 0.1, 0.02, grid_n);
    auto fd1 = verify_fd(eq17b, img1.field, g1, 0.04);
    stage("hodograph image solves 1.7b", fd1.residual, 1e-6);

    // transformation (3): u^(t, x^) = u~(t, ln x^) / x^
    auto u1 = img1.field.u;
    SolutionField f2;
    f2.u = [u1](double t, double xh) { return u1(t, std::log(xh)) / xh; };
    GridSpec g2 = g1;
    g2.x0 = std::exp(img1.grid.x0 + 0.1);
    g2.x1 = std::exp(img1.grid.x1 - 0.1);
    auto fd2 = verify_fd(eq29, f2, shrink(g2, 0.0, 0.0, grid_n), 0.03);
    stage("transformed image solves 1.7a(mu=-2)", fd2.residual, 1e-6);

    auto img2 = hodograph_on_solution(eq29, f2, g2, /*fast=*/true);
    GridSpec g3 = shrink(img2.grid, 0.12, 0.02, grid_n);
    auto fd3 = verify_fd(heat, img2.field, g3, 0.04);
    stage("final image is caloric (heat potential)", fd3.residual, 1e-6);
  }

  if (with_complex) {
    auto r = verify_complex_reduction_27(2.0, 1.0);
    stage("2.7 -> 2.5*' over C (mu=2, nu=1)", std::max(r.max_d_err, r.max_K_err), 1e-8);
  }
  return rep;
}

}  // namespace dcsym
