#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "dcsym/catalog.hpp"

using namespace dcsym;

namespace {

SampleBox case_box(const ClassificationCase& c) {
  SampleBox b;
  b.set(Var::u, c.u_range.lo, c.u_range.hi);
  return b;
}

// representative parameter values honoring the case's safe ranges
std::vector<std::map<std::string, double>> param_sets(const ClassificationCase& c) {
  if (c.params.empty()) return {{}};
  std::vector<std::map<std::string, double>> out;
  Rng rng(static_cast<std::uint64_t>(std::hash<std::string>{}(c.label)));
  for (int i = 0; i < 3; ++i) {
    std::map<std::string, double> m;
    for (const auto& p : c.params) {
      Range r = c.param_box.count(p) ? c.param_box.at(p) : Range{0.3, 2.0};
      m[p] = rng.uniform(r.lo, r.hi);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

TEST_CASE("every table-1 row passes invariance at sampled parameters") {
  for (const auto& c : catalog().table1) {
    CAPTURE(c.label);
    auto arbs = c.d_arbitrary() || c.kK_arbitrary() ? arbitrary_instantiations_table1()
                                                    : std::vector<std::pair<std::string, std::string>>{{"", ""}};
    for (const auto& [ad, ak] : arbs) {
      for (const auto& ps : param_sets(c)) {
        DcEquation eq = c.equation(ps, ad.empty() ? "1+u^2" : ad, ak.empty() ? "u^3" : ak);
        int op_index = 0;
        for (const auto& op : c.basis) {
          CAPTURE(op_index);
          if (op.functional == FunctionalKind::h_tx) {
            for (const Expr& h : heat_solutions_tx()) {
              auto X = instantiate_h(op.instantiate(ps), h);
              CHECK(invariance_residual_scalar(X, eq, 40, 101, case_box(c)) < 1e-8);
            }
          } else {
            auto X = op.instantiate(ps);
            CHECK(invariance_residual_scalar(X, eq, 40, 102 + op_index, case_box(c)) < 1e-8);
          }
          ++op_index;
        }
      }
    }
  }
}

TEST_CASE("every table-2 row passes system invariance at sampled parameters") {
  for (const auto& c : catalog().table2) {
    CAPTURE(c.label);
    auto arbs = c.d_arbitrary() || c.kK_arbitrary() ? arbitrary_instantiations_table2()
                                                    : std::vector<std::pair<std::string, std::string>>{{"", ""}};
    for (const auto& [ad, aK] : arbs) {
      for (const auto& ps : param_sets(c)) {
        DcEquation eq = c.equation(ps, ad.empty() ? "1+u^2" : ad, aK.empty() ? "u^3" : aK);
        int op_index = 0;
        for (const auto& op : c.basis) {
          CAPTURE(op_index);
          if (op.functional == FunctionalKind::phi_tv) {
            for (const Expr& p : heat_solutions_tv()) {
              auto X = instantiate_phi(op.instantiate(ps), p);
              CHECK(invariance_residual_system(X, eq, 40, 201, case_box(c)) < 1e-8);
            }
          } else if (op.functional == FunctionalKind::h_tx) {
            for (const Expr& h : heat_solutions_tx()) {
              auto X = instantiate_h(op.instantiate(ps), h);
              CHECK(invariance_residual_system(X, eq, 40, 202, case_box(c)) < 1e-8);
            }
          } else {
            auto X = op.instantiate(ps);
            CHECK(invariance_residual_system(X, eq, 40, 203 + op_index, case_box(c)) < 1e-8);
          }
          ++op_index;
        }
      }
    }
  }
}

TEST_CASE("negative controls: xi perturbed by +u fails everywhere") {
  auto perturb = [](const VectorField& X) {
    VectorField Y = X;
    Y.xi = add(Y.xi, variable(Var::u));
    return Y;
  };
  for (const auto& c : catalog().table1) {
    CAPTURE(c.label);
    auto ps = param_sets(c)[0];
    DcEquation eq = c.equation(ps);
    const auto& op = c.basis.back();
    VectorField X = op.functional == FunctionalKind::h_tx
                        ? instantiate_h(op.instantiate(ps), heat_solutions_tx()[2])
                        : op.instantiate(ps);
    CHECK(invariance_residual_scalar(perturb(X), eq, 40, 301, case_box(c)) > 1e-3);
  }
  for (const auto& c : catalog().table2) {
    CAPTURE(c.label);
    auto ps = param_sets(c)[0];
    DcEquation eq = c.equation(ps);
    const auto& op = c.basis.back();
    VectorField X;
    if (op.functional == FunctionalKind::phi_tv)
      X = instantiate_phi(op.instantiate(ps), heat_solutions_tv()[2]);
    else if (op.functional == FunctionalKind::h_tx)
      X = instantiate_h(op.instantiate(ps), heat_solutions_tx()[2]);
    else
      X = op.instantiate(ps);
    CHECK(invariance_residual_system(perturb(X), eq, 40, 302, case_box(c)) > 1e-3);
  }
}

TEST_CASE("kernel algebras hold for random template equations") {
  Rng rng(555);
  SampleBox b;
  b.set(Var::u, 0.4, 2.2);
  const char* ds[] = {"u^2+1", "exp(u)", "u^(3/2)", "1/(1+u^2)"};
  const char* ks[] = {"u", "u^2", "exp(u)", "ln(u)"};
  for (int i = 0; i < 4; ++i) {
    auto eq = DcEquation::from_dk(parse(ds[i]), parse(ks[i]));
    CHECK(invariance_residual_scalar(VectorField::txu(constant(1), constant(0), constant(0)), eq,
                                     30, rng.next(), b) < 1e-10);
    CHECK(invariance_residual_scalar(VectorField::txu(constant(0), constant(1), constant(0)), eq,
                                     30, rng.next(), b) < 1e-10);
    auto eqK = DcEquation::from_dK(parse(ds[i]), parse(ks[i]));
    for (int j = 0; j < 3; ++j) {
      Expr z = constant(0);
      VectorField kernel = VectorField::txuv(j == 0 ? constant(1) : z, j == 1 ? constant(1) : z,
                                             z, j == 2 ? constant(1) : z);
      CHECK(invariance_residual_system(kernel, eqK, 30, rng.next(), b) < 1e-10);
    }
  }
}

TEST_CASE("catalog lookup and row counts") {
  CHECK(catalog().table1.size() == 12);
  CHECK(catalog().table2.size() == 21);
  CHECK(catalog().solutions9.size() == 7);
  CHECK(catalog().solutions10.size() == 6);
  CHECK(catalog().arrows9.size() == 8);
  CHECK(catalog().arrows10.size() == 7);
  CHECK(catalog().pot_equiv_algebra.size() == 10);
  CHECK(catalog().find("2.8*").params == std::vector<std::string>{"mu"});
  CHECK_THROWS(catalog().find("9.9"));
}

TEST_CASE("closure of finite table algebras") {
  // spot-check several finite cases across both tables
  for (const char* label : {"1.4", "1.8", "1.9", "2.3*", "2.4", "2.8"}) {
    const auto& c = catalog().find(label);
    CAPTURE(label);
    auto ps = param_sets(c)[0];
    DcEquation eq = c.equation(ps);
    std::vector<VectorField> basis;
    for (const auto& op : c.basis) basis.push_back(op.instantiate(ps));
    auto rep = closure_check(basis, eq, c.table == 2, 405, case_box(c));
    CHECK(rep.ok);
  }
  // an infinite-dimensional case: brackets must stay symmetries
  {
    const auto& c = catalog().find("2.9");
    DcEquation eq = c.equation({});
    std::vector<VectorField> basis;
    for (const auto& op : c.basis) {
      VectorField X = op.instantiate({});
      X.functional = op.functional;
      basis.push_back(X);
    }
    auto rep = closure_check(basis, eq, true, 406, case_box(c));
    CHECK(rep.ok);
    CHECK(rep.pairs_invariance_checked > 0);
  }
}
