#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsym/parse.hpp"
#include "dcsym/pushforward.hpp"

using namespace dcsym;

TEST_CASE("identity change maps a residual to itself") {
  auto eq = DcEquation::from_dk(parse("u^(-1)"), parse("0"));
  auto rep = pushforward_residual(identity_change(false), eq, scalar_residual(eq), 100, 3, {});
  CHECK(rep.pass(1e-10));
}

TEST_CASE("transformation (3): case 1.7b to case 1.7a at mu = -2") {
  auto src = DcEquation::from_dk(parse("u^(-2)"), parse("u^(-2)"));
  auto dst = DcEquation::from_dk(parse("u^(-2)"), parse("0"));
  SampleBox box;
  box.set(Var::u, 0.4, 2.2).set(Var::x, 0.2, 1.5);
  auto rep = pushforward_residual(transform3(false), src, scalar_residual(dst), 200, 5, box);
  CHECK(rep.points >= 150);
  CHECK(rep.pass(1e-8));

  // direction matters: pushing towards the wrong target fails
  auto wrong = DcEquation::from_dk(parse("u^(-2)"), parse("1"));
  auto bad = pushforward_residual(transform3(false), src, scalar_residual(wrong), 100, 6, box);
  CHECK(bad.max_rel_residual > 1e-3);
}

TEST_CASE("pushforward agrees with apply_point") {
  // Theorem-1 transform with e5 = 2 maps d=1,k=0 to d=4,k=0
  PointEquivTransform T;
  T.e5 = 2;
  auto src = DcEquation::from_dk(parse("1"), parse("0"));
  auto dst = apply_point(T, src);
  SampleBox box;
  CHECK(is_zero_numeric(sub(dst.d, parse("4")), box, 10, 1e-12));

  PointChangeOfVariables C;
  C.fwd_t = parse("t");
  C.fwd_x = parse("2*x");
  C.fwd_u = parse("u");
  C.inv_t = parse("t");
  C.inv_x = parse("x/2");
  C.inv_u = parse("u");
  auto rep = pushforward_residual(C, src, scalar_residual(dst), 100, 7, box);
  CHECK(rep.pass(1e-9));

  // and a full transform with drift: x~ = x + e4 e7 t, e7 = 1
  PointEquivTransform G;
  G.e7 = 1;
  auto dstG = apply_point(G, src);
  PointChangeOfVariables CG;
  CG.fwd_t = parse("t");
  CG.fwd_x = parse("x + t");
  CG.fwd_u = parse("u");
  CG.inv_t = parse("t");
  CG.inv_x = parse("x - t");
  CG.inv_u = parse("u");
  auto repG = pushforward_residual(CG, src, scalar_residual(dstG), 100, 8, box);
  CHECK(repG.pass(1e-9));
}

TEST_CASE("hodograph pet_change validates Theorem-3 action by pushforward") {
  // scalar consequence: the hodograph's (t,x,u)-part is not a point map of
  // (1) alone (x~ depends on v), so validate through the conserved subgroup
  // instead: embed a conserved transform and compare coordinate actions.
  ConservedEquivTransform T;
  T.e4 = 2;
  T.e5 = -1;
  T.e6 = 3;
  T.e7 = 0.5;
  T.e8 = -1;
  auto P = embed_conserved(T);
  auto C = pet_change(P);
  SampleBox b;
  b.set(Var::u, 0.4, 2.0).set(Var::v, 0.4, 2.0);
  C.validate(b);
  // kinematic part matches the conserved formulas
  CHECK(structural_equal(normalize(C.fwd_t), normalize(parse("2*t"))));
  CHECK(structural_equal(normalize(C.fwd_x), normalize(parse("-x + 1*t"))));
}
