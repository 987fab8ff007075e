#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsym/model.hpp"
#include "dcsym/parse.hpp"

using namespace dcsym;

namespace {

SampleBox ubox() {
  SampleBox b;
  b.set(Var::u, 0.3, 2.7);
  return b;
}

bool expr_eq(const Expr& a, const Expr& b, const SampleBox& box = ubox()) {
  return is_zero_numeric(sub(a, b), box, 60, 1e-9);
}

}  // namespace

TEST_CASE("K_from_k on power convection") {
  Expr nu = param("nu");
  auto eq = DcEquation::from_dk(parse("u"), parse("u^nu"));
  auto out = K_from_k(eq);
  SampleBox box = ubox();
  box.set("nu", 0.2, 2.0);
  CHECK(expr_eq(*out.K, parse("-u^(nu+1)/(nu+1)"), box));
}

TEST_CASE("K_from_k trivial and table cases") {
  auto z = K_from_k(DcEquation::from_dk(parse("u"), parse("0")));
  CHECK(z.K->is_zero());

  // k = u^-2 -> K = u^-1 (case 2.10's K)
  auto c = K_from_k(DcEquation::from_dk(parse("u^(-2)"), parse("u^(-2)")));
  CHECK(expr_eq(*c.K, parse("u^(-1)")));

  // k = 1/u -> K = -ln u
  auto l = K_from_k(DcEquation::from_dk(parse("u^mu"), parse("u^(-1)")));
  CHECK(expr_eq(*l.K, parse("-ln(u)")));

  // outside the table
  CHECK_THROWS(K_from_k(DcEquation::from_dk(parse("u"), parse("exp(u^2)"))));
}

TEST_CASE("scalar residual shapes") {
  SampleBox box;
  box.set(Var::u, 0.4, 2.5);

  // fast diffusion: u_t - u_xx/u + u_x^2/u^2
  auto fd = DcEquation::from_dk(parse("u^(-1)"), parse("0"));
  Expr expected = parse("u_t - u_xx/u + u_x^2/u^2");
  CHECK(is_zero_numeric(sub(scalar_residual(fd), expected), box, 60, 1e-9));

  // heat
  auto heat = DcEquation::from_dk(parse("1"), parse("0"));
  CHECK(structural_equal(scalar_residual(heat), parse("u_t - u_xx")));

  // Burgers-type, k = u
  auto burgers = DcEquation::from_dk(parse("1"), parse("u"));
  CHECK(is_zero_numeric(sub(scalar_residual(burgers), parse("u_t - u_xx - u*u_x")), box, 60, 1e-9));
}

TEST_CASE("potential system residuals") {
  auto s1 = potential_system(DcEquation::from_dK(parse("u^(-2)"), parse("0")));
  CHECK(structural_equal(s1.first, parse("v_x - u")));
  CHECK(expr_eq(s1.second, parse("v_t - u^(-2)*u_x")));

  auto s2 = potential_system(DcEquation::from_dK(parse("1"), parse("-u^2")));
  CHECK(expr_eq(s2.second, parse("v_t - u_x - u^2")));

  auto s3 = potential_system(DcEquation::from_dK(parse("1"), parse("0")));
  CHECK(structural_equal(s3.second, parse("v_t - u_x")));
}

TEST_CASE("potential equation examples") {
  auto p1 = potential_equation(DcEquation::from_dK(parse("u^(-1)"), parse("0")));
  SampleBox box;
  box.set(Var::v_x, 0.4, 2.5);
  CHECK(is_zero_numeric(sub(p1.residual, parse("v_t - v_xx/v_x")), box, 50, 1e-9));

  auto p2 = potential_equation(DcEquation::from_dK(parse("1"), parse("-u^2")));
  CHECK(is_zero_numeric(sub(p2.residual, parse("v_t - v_xx - v_x^2")), box, 50, 1e-9));

  auto p3 = potential_equation(DcEquation::from_dK(parse("1"), parse("0")));
  CHECK(structural_equal(p3.residual, parse("v_t - v_xx")));
}

TEST_CASE("x-derivative of potential equation reproduces scalar residual") {
  // D_x of the potential residual, with v-jets renamed one step down,
  // equals the scalar residual.
  Rng rng(99);
  auto check_one = [&](const DcEquation& eq) {
    auto pe = potential_equation(eq);
    Expr dxres = total_derivative(pe.residual, Var::x);
    Subst ren;
    ren.vars[Var::v_x] = variable(Var::u);
    ren.vars[Var::v_xx] = variable(Var::u_x);
    ren.vars[Var::v_xxx] = variable(Var::u_xx);
    ren.vars[Var::v_tx] = variable(Var::u_t);
    Expr renamed = substitute(dxres, ren);
    Expr diffr = sub(renamed, scalar_residual(eq));
    SampleBox box;
    box.set(Var::u, 0.4, 2.4);
    CHECK(is_zero_numeric(diffr, box, 40, 1e-9, rng.next()));
  };
  check_one(DcEquation::from_dK(parse("u^(-2)"), parse("u^(-1)")));
  check_one(DcEquation::from_dK(parse("exp(u)"), parse("u^2")));
  check_one(DcEquation::from_dK(parse("exp(mu*arctan(u))/(u^2+1)"), parse("0")));
  // random power-family templates
  for (int i = 0; i < 20; ++i) {
    double mu = rng.uniform(-2.5, 2.5);
    double nu = rng.uniform(0.3, 2.0);
    double c = rng.uniform(0.5, 2.0);
    auto eq = DcEquation::from_dK(mul(constant(c), pow(variable(Var::u), constant(mu))),
                                  pow(variable(Var::u), constant(nu)));
    check_one(eq);
  }
}

TEST_CASE("validate enforces invariants") {
  SampleBox box = ubox();
  CHECK_THROWS(validate(DcEquation::from_dk(parse("0"), parse("0")), box));
  DcEquation bad;
  bad.d = parse("1");
  bad.k = parse("u");
  bad.K = parse("u");  // K_u = 1 != -k
  CHECK_THROWS(validate(bad, box));
  DcEquation good;
  good.d = parse("1");
  good.k = parse("u");
  good.K = parse("-u^2/2");
  CHECK_NOTHROW(validate(good, box));
}

TEST_CASE("t-derivative elimination closes over x-jets") {
  auto eq = DcEquation::from_dk(parse("u^(-1)"), parse("0"));
  Expr e = parse("u_tt + u_tx*u_t");
  Expr out = eliminate_u_t_derivatives(e, eq);
  std::array<bool, kVarCount> present{};
  collect_free_vars(out, present);
  CHECK_FALSE(present[static_cast<std::size_t>(Var::u_t)]);
  CHECK_FALSE(present[static_cast<std::size_t>(Var::u_tx)]);
  CHECK_FALSE(present[static_cast<std::size_t>(Var::u_tt)]);
  CHECK_FALSE(present[static_cast<std::size_t>(Var::u_txx)]);

  // consistency against an exact solution u = e^x of the fast diffusion
  // equation: all eliminated expressions must agree with the true values.
  // u = e^x: u_t = 0, so eliminated u_t must evaluate to 0 on the jet of e^x.
  Expr ut_elim = eliminate_u_t_derivatives(variable(Var::u_t), eq);
  Valuation val;
  double x0 = 0.6, ex = std::exp(x0);
  val.set(Var::u, ex);
  val.set(Var::u_x, ex);
  val.set(Var::u_xx, ex);
  val.set(Var::u_xxx, ex);
  val.set(Var::u_xxxx, ex);
  CHECK(std::abs(eval(ut_elim, val)) < 1e-12);
}
