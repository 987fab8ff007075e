#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcsym/classify.hpp"

using namespace dcsym;

namespace {

std::map<std::string, double> params_for(const ClassificationCase& c, Rng& rng) {
  std::map<std::string, double> out;
  for (const auto& p : c.params) {
    Range r = c.param_box.count(p) ? c.param_box.at(p) : Range{0.3, 2.0};
    out[p] = rng.uniform(r.lo, r.hi);
  }
  return out;
}

}  // namespace

TEST_CASE("classify: spec examples") {
  // d = 3u^2, k = 0 -> 1.7a with mu = 2
  auto r1 = classify(DcEquation::from_dk(parse("3*u^2"), parse("0")), 1);
  REQUIRE(r1.ok);
  CHECK(r1.label == "1.7a");
  CHECK(r1.params["mu"] == doctest::Approx(2.0).epsilon(1e-8));

  // d = 1, k = 5u -> 1.9
  auto r2 = classify(DcEquation::from_dk(parse("1"), parse("5*u")), 1);
  REQUIRE(r2.ok);
  CHECK(r2.label == "1.9");

  // d = e^u, k = e^u -> 1.2 with mu = 1
  auto r3 = classify(DcEquation::from_dk(parse("exp(u)"), parse("exp(u)")), 1);
  REQUIRE(r3.ok);
  CHECK(r3.label == "1.2");
  CHECK(r3.params["mu"] == doctest::Approx(1.0).epsilon(1e-8));

  // d = u^-2, k = 0 -> 1.7a at mu = -2
  auto r4 = classify(DcEquation::from_dk(parse("u^(-2)"), parse("0")), 1);
  REQUIRE(r4.ok);
  CHECK(r4.label == "1.7a");
  CHECK(r4.params["mu"] == doctest::Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("classify: special table-1 rows") {
  CHECK(classify(DcEquation::from_dk(parse("u^(-4/3)"), parse("0")), 1).label == "1.8");
  CHECK(classify(DcEquation::from_dk(parse("u^(-2)"), parse("u^(-2)")), 1).label == "1.7b");
  CHECK(classify(DcEquation::from_dk(parse("1"), parse("0")), 1).label == "1.10");
  CHECK(classify(DcEquation::from_dk(parse("exp(u)"), parse("0")), 1).label == "1.4");
  CHECK(classify(DcEquation::from_dk(parse("exp(u)"), parse("u")), 1).label == "1.3");
  CHECK(classify(DcEquation::from_dk(parse("u^(3/2)"), parse("ln(u)")), 1).label == "1.6");
  // arbitrary-d rows
  CHECK(classify(DcEquation::from_dk(parse("1+u^2"), parse("0")), 1).label == "1.1");
  CHECK(classify(DcEquation::from_dk(parse("1+u^2"), parse("u^3")), 1).label == "1.0");
  // d outside any special family with constant k after normalization
  CHECK(classify(DcEquation::from_dk(parse("u^2+u"), parse("7")), 1).label == "1.1");
}

TEST_CASE("classify: table-2 rows") {
  CHECK(classify(DcEquation::from_dK(parse("u^(-2)"), parse("0")), 2).label == "2.9");
  CHECK(classify(DcEquation::from_dK(parse("u^(-2)"), parse("u^(-1)")), 2).label == "2.10");
  CHECK(classify(DcEquation::from_dK(parse("1"), parse("-u^2")), 2).label == "2.11");
  CHECK(classify(DcEquation::from_dK(parse("1"), parse("0")), 2).label == "2.12");
  CHECK(classify(DcEquation::from_dK(parse("exp(u)"), parse("u^2")), 2).label == "2.3*");
  CHECK(classify(DcEquation::from_dK(parse("exp(u)"), parse("0")), 2).label == "2.4*");
  CHECK(classify(DcEquation::from_dK(parse("u^(-2)*exp(1/u)"), parse("0")), 2).label == "2.3");
  CHECK(classify(DcEquation::from_dK(parse("u^(-2)*exp(1/u)"), parse("u^(-1)")), 2).label == "2.2");

  auto r21 = classify(DcEquation::from_dK(parse("u^(-2)*exp(3/(2*u))"), parse("u*exp(1/u)")), 2);
  REQUIRE(r21.ok);
  CHECK(r21.label == "2.1");
  CHECK(r21.params["mu"] == doctest::Approx(1.5).epsilon(1e-6));

  auto r24 = classify(DcEquation::from_dK(parse("u^(7/10)/(u+1)^(27/10)"), parse("u^(8/5)/(u+1)^(3/5)")), 2);
  REQUIRE(r24.ok);
  CHECK(r24.label == "2.4");
  CHECK(r24.params["mu"] == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(r24.params["nu"] == doctest::Approx(0.6).epsilon(1e-5));

  auto r25 = classify(DcEquation::from_dK(parse("u^(1/2)/(u+1)^(5/2)"), parse("u*ln(u/(u+1))")), 2);
  REQUIRE(r25.ok);
  CHECK(r25.label == "2.5");

  auto r27 = classify(
      DcEquation::from_dK(parse("exp(mu*arctan(u))/(u^2+1)"), parse("(u^2+1)^(1/2)*exp(nu*arctan(u))")), 2);
  // unbound parameters cannot classify
  CHECK_FALSE(r27.ok);

  Subst s;
  s.params["mu"] = constant(1.2);
  s.params["nu"] = constant(0.4);
  auto d27 = substitute(parse("exp(mu*arctan(u))/(u^2+1)"), s);
  auto K27 = substitute(parse("(u^2+1)^(1/2)*exp(nu*arctan(u))"), s);
  auto r27b = classify(DcEquation::from_dK(d27, K27), 2);
  REQUIRE(r27b.ok);
  CHECK(r27b.label == "2.7");
  CHECK(r27b.params["mu"] == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(r27b.params["nu"] == doctest::Approx(0.4).epsilon(1e-6));

  auto r28 = classify(DcEquation::from_dK(substitute(parse("exp(mu*arctan(u))/(u^2+1)"), s), parse("0")), 2);
  REQUIRE(r28.ok);
  CHECK(r28.label == "2.8");
}

TEST_CASE("classify: idempotent on canonical representatives") {
  Rng rng(909);
  for (const auto& c : catalog().table1) {
    CAPTURE(c.label);
    auto ps = params_for(c, rng);
    DcEquation eq = c.equation(ps);
    auto r = classify(eq, 1);
    REQUIRE(r.ok);
    CHECK(r.label == c.label);
    for (const auto& [name, value] : ps)
      CHECK(r.params[name] == doctest::Approx(value).epsilon(1e-5));
  }
  for (const auto& c : catalog().table2) {
    CAPTURE(c.label);
    auto ps = params_for(c, rng);
    DcEquation eq = c.equation(ps);
    auto r = classify(eq, 2);
    REQUIRE(r.ok);
    CHECK(r.label == c.label);
  }
}

TEST_CASE("classify: equivariance under random group elements") {
  Rng rng(4242);
  int done = 0;
  const auto& t1 = catalog().table1;
  for (int iter = 0; iter < 200 && done < 100; ++iter) {
    const auto& c = t1[iter % t1.size()];
    auto ps = params_for(c, rng);
    DcEquation eq = c.equation(ps);
    // generator keeps the canonical window visible: positive u-scale,
    // modest shifts
    PointEquivTransform T;
    T.e1 = rng.uniform(-0.5, 0.5);
    T.e2 = rng.uniform(-0.5, 0.5);
    T.e3 = rng.uniform(-0.4, 0.4);
    T.e4 = rng.uniform(0.4, 2.0) * (rng.uniform(0, 1) < 0.3 ? -1 : 1);
    T.e5 = rng.uniform(0.4, 2.0) * (rng.uniform(0, 1) < 0.3 ? -1 : 1);
    T.e6 = rng.uniform(0.5, 1.6);
    T.e7 = rng.uniform(-0.8, 0.8);
    DcEquation moved = apply_point(T, eq);
    auto r = classify(moved, 1);
    CAPTURE(c.label);
    CAPTURE(iter);
    REQUIRE(r.ok);
    CHECK(r.label == c.label);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("classify: unclassifiable inputs") {
  // unbound parameter
  auto r = classify(DcEquation::from_dk(parse("u^mu"), parse("0")), 1);
  CHECK_FALSE(r.ok);
  // evaluation impossible everywhere
  auto r2 = classify(DcEquation::from_dk(parse("ln(-1-u^2)"), parse("0")), 1);
  CHECK_FALSE(r2.ok);
}
