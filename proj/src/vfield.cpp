#include "dcsym/vfield.hpp"

#include <cmath>

namespace dcsym {

namespace {

Expr V(Var v) { return variable(v); }

Expr zero() { return constant(0); }

}  // namespace

VectorField VectorField::txu(Expr tau, Expr xi, Expr eta) {
  VectorField X;
  X.tau = normalize(tau);
  X.xi = normalize(xi);
  X.eta = normalize(eta);
  return X;
}

VectorField VectorField::txuv(Expr tau, Expr xi, Expr eta, Expr zeta) {
  VectorField X = txu(tau, xi, eta);
  X.zeta = normalize(zeta);
  return X;
}

Expr apply_field(const VectorField& X, const Expr& f) {
  Expr out = add(add(mul(X.tau, diff(f, Var::t)), mul(X.xi, diff(f, Var::x))),
                 mul(X.eta, diff(f, Var::u)));
  if (X.zeta) out = add(out, mul(*X.zeta, diff(f, Var::v)));
  return out;
}

VectorField instantiate_h(const VectorField& X, const Expr& h) {
  Subst s;
  s.params["h"] = h;
  s.params["h_x"] = diff(h, Var::x);
  s.params["h_t"] = diff(h, Var::t);
  VectorField out = X;
  out.tau = substitute(X.tau, s);
  out.xi = substitute(X.xi, s);
  out.eta = substitute(X.eta, s);
  if (X.zeta) out.zeta = substitute(*X.zeta, s);
  out.functional = FunctionalKind::none;
  return out;
}

VectorField instantiate_phi(const VectorField& X, const Expr& phi) {
  Subst s;
  s.params["phi"] = phi;
  s.params["phi_v"] = diff(phi, Var::v);
  s.params["phi_t"] = diff(phi, Var::t);
  VectorField out = X;
  out.tau = substitute(X.tau, s);
  out.xi = substitute(X.xi, s);
  out.eta = substitute(X.eta, s);
  if (X.zeta) out.zeta = substitute(*X.zeta, s);
  out.functional = FunctionalKind::none;
  return out;
}

std::vector<Expr> heat_solutions_tx() {
  Expr t = V(Var::t), x = V(Var::x);
  return {constant(1), x, add(mul(x, x), mul(constant(2), t)), exp(add(x, t))};
}

std::vector<Expr> heat_solutions_tv() {
  Expr t = V(Var::t), v = V(Var::v);
  return {constant(1), v, add(mul(v, v), mul(constant(2), t)), exp(add(v, t))};
}

// ---------------------------------------------------------------------------
// Prolongation

namespace {

struct Prolongation {
  Expr eta_t, eta_x, eta_xx;  // u-direction
  Expr zeta_t, zeta_x;        // v-direction (system mode)
};

void require_instantiated(const VectorField& X) {
  for (const Expr* c : {&X.tau, &X.xi, &X.eta}) {
    auto ps = free_params(*c);
    if (ps.count("h") || ps.count("h_x") || ps.count("h_t") || ps.count("phi") ||
        ps.count("phi_v") || ps.count("phi_t"))
      throw std::invalid_argument("vector field carries an uninstantiated functional parameter");
  }
  if (X.zeta) {
    auto ps = free_params(*X.zeta);
    if (ps.count("h") || ps.count("phi"))
      throw std::invalid_argument("vector field carries an uninstantiated functional parameter");
  }
}

// prolongation coefficients for the u-component up to u_xx
Prolongation prolong_u(const VectorField& X) {
  Prolongation P;
  Expr Dt_tau = total_derivative(X.tau, Var::t);
  Expr Dx_tau = total_derivative(X.tau, Var::x);
  Expr Dt_xi = total_derivative(X.xi, Var::t);
  Expr Dx_xi = total_derivative(X.xi, Var::x);
  P.eta_t = sub(sub(total_derivative(X.eta, Var::t), mul(V(Var::u_t), Dt_tau)),
                mul(V(Var::u_x), Dt_xi));
  P.eta_x = sub(sub(total_derivative(X.eta, Var::x), mul(V(Var::u_t), Dx_tau)),
                mul(V(Var::u_x), Dx_xi));
  P.eta_xx = sub(sub(total_derivative(P.eta_x, Var::x), mul(V(Var::u_tx), Dx_tau)),
                 mul(V(Var::u_xx), Dx_xi));
  if (X.zeta) {
    P.zeta_t = sub(sub(total_derivative(*X.zeta, Var::t), mul(V(Var::v_t), Dt_tau)),
                   mul(V(Var::v_x), Dt_xi));
    P.zeta_x = sub(sub(total_derivative(*X.zeta, Var::x), mul(V(Var::v_t), Dx_tau)),
                   mul(V(Var::v_x), Dx_xi));
  }
  return P;
}

// prolongation for a field acting on v over (t,x): tau, xi, zeta
Prolongation prolong_v(const VectorField& X) {
  if (!X.zeta) throw std::invalid_argument("prolong_v: field has no v-component");
  Prolongation P;
  Expr Dt_tau = total_derivative(X.tau, Var::t);
  Expr Dx_tau = total_derivative(X.tau, Var::x);
  Expr Dt_xi = total_derivative(X.xi, Var::t);
  Expr Dx_xi = total_derivative(X.xi, Var::x);
  P.zeta_t = sub(sub(total_derivative(*X.zeta, Var::t), mul(V(Var::v_t), Dt_tau)),
                 mul(V(Var::v_x), Dt_xi));
  P.zeta_x = sub(sub(total_derivative(*X.zeta, Var::x), mul(V(Var::v_t), Dx_tau)),
                 mul(V(Var::v_x), Dx_xi));
  P.eta_xx = sub(sub(total_derivative(P.zeta_x, Var::x), mul(V(Var::v_tx), Dx_tau)),
                 mul(V(Var::v_xx), Dx_xi));  // zeta_xx stored here
  return P;
}

Expr prolonged_action(const VectorField& X, const Prolongation& P, const Expr& residual,
                      bool with_v_first_order) {
  Expr out = add(add(mul(X.tau, diff(residual, Var::t)), mul(X.xi, diff(residual, Var::x))),
                 mul(X.eta, diff(residual, Var::u)));
  if (X.zeta) out = add(out, mul(*X.zeta, diff(residual, Var::v)));
  out = add(out, mul(P.eta_t, diff(residual, Var::u_t)));
  out = add(out, mul(P.eta_x, diff(residual, Var::u_x)));
  out = add(out, mul(P.eta_xx, diff(residual, Var::u_xx)));
  if (with_v_first_order) {
    out = add(out, mul(P.zeta_t, diff(residual, Var::v_t)));
    out = add(out, mul(P.zeta_x, diff(residual, Var::v_x)));
  }
  return out;
}

double max_rel_over_samples(const Expr& e, int samples, std::uint64_t seed, const SampleBox& box) {
  ZeroTestReport rep = zero_test(e, box, samples, 1e300, seed);
  return rep.max_rel;
}

SampleBox with_jet_defaults(SampleBox box) {
  auto set_if_absent = [&box](Var v, double lo, double hi) {
    if (!box.vars.count(v)) box.set(v, lo, hi);
  };
  for (Var v : {Var::u_x, Var::u_xx, Var::u_xxx, Var::u_xxxx, Var::u_t, Var::v_x, Var::v_xx,
                Var::v_xxx, Var::v_t})
    set_if_absent(v, -2.0, 2.0);
  return box;
}

}  // namespace

double invariance_residual_scalar(const VectorField& X, const DcEquation& eq, int samples,
                                  std::uint64_t seed, const SampleBox& box) {
  require_instantiated(X);
  Expr residual = scalar_residual(eq);
  Prolongation P = prolong_u(X);
  Expr action = prolonged_action(X, P, residual, false);
  Expr on_manifold = eliminate_u_t_derivatives(action, eq);
  return max_rel_over_samples(on_manifold, samples, seed, with_jet_defaults(box));
}

double invariance_residual_system(const VectorField& X, const DcEquation& eq, int samples,
                                  std::uint64_t seed, const SampleBox& box) {
  require_instantiated(X);
  if (!X.zeta) throw std::invalid_argument("system invariance needs a field on (t,x,u,v)");
  PotentialSystem sys = potential_system(eq);
  Prolongation P = prolong_u(X);
  Expr a1 = prolonged_action(X, P, sys.first, true);
  Expr a2 = prolonged_action(X, P, sys.second, true);
  // on-manifold: v_x = u, v_t = d u_x - K
  Subst manifold;
  manifold.vars[Var::v_x] = V(Var::u);
  manifold.vars[Var::v_t] = normalize(sub(mul(sys.eq.d, V(Var::u_x)), *sys.eq.K));
  Expr r1 = substitute(a1, manifold);
  Expr r2 = substitute(a2, manifold);
  SampleBox jb = with_jet_defaults(box);
  double m1 = max_rel_over_samples(r1, samples, seed, jb);
  double m2 = max_rel_over_samples(r2, samples, seed + 1, jb);
  return std::max(m1, m2);
}

double invariance_residual_potential(const VectorField& X, const DcEquation& eq, int samples,
                                     std::uint64_t seed, const SampleBox& box) {
  require_instantiated(X);
  PotentialEquation pe = potential_equation(eq);
  Prolongation P = prolong_v(X);
  Expr out = add(add(mul(X.tau, diff(pe.residual, Var::t)), mul(X.xi, diff(pe.residual, Var::x))),
                 mul(*X.zeta, diff(pe.residual, Var::v)));
  out = add(out, mul(P.zeta_t, diff(pe.residual, Var::v_t)));
  out = add(out, mul(P.zeta_x, diff(pe.residual, Var::v_x)));
  out = add(out, mul(P.eta_xx, diff(pe.residual, Var::v_xx)));
  Expr on_manifold = eliminate_v_t_derivatives(out, eq);
  return max_rel_over_samples(on_manifold, samples, seed, with_jet_defaults(box));
}

VectorField commutator(const VectorField& X, const VectorField& Y) {
  VectorField Z;
  Z.tau = normalize(sub(apply_field(X, Y.tau), apply_field(Y, X.tau)));
  Z.xi = normalize(sub(apply_field(X, Y.xi), apply_field(Y, X.xi)));
  Z.eta = normalize(sub(apply_field(X, Y.eta), apply_field(Y, X.eta)));
  if (X.zeta || Y.zeta) {
    Expr zx = X.zeta ? *X.zeta : zero();
    Expr zy = Y.zeta ? *Y.zeta : zero();
    VectorField Xz = X, Yz = Y;
    Xz.zeta = zx;
    Yz.zeta = zy;
    Z.zeta = normalize(sub(apply_field(Xz, zy), apply_field(Yz, zx)));
  }
  return Z;
}

std::optional<std::vector<std::complex<double>>> span_fit(const std::vector<VectorField>& basis,
                                                          const VectorField& Z,
                                                          const SampleBox& box, std::uint64_t seed,
                                                          double tol) {
  using C = std::complex<double>;
  Rng rng(seed);
  const int pts = 12;
  std::vector<std::vector<C>> A;
  std::vector<C> b;
  double scale = 0;
  for (int p = 0; p < pts; ++p) {
    Valuation val;
    // bind every base variable so all coefficients evaluate
    for (Var v : {Var::t, Var::x, Var::u, Var::v}) {
      auto it = box.vars.find(v);
      Range r = it != box.vars.end() ? it->second : box.var_default;
      val.set(v, rng.uniform(r.lo, r.hi));
    }
    // assemble rows component by component
    std::vector<const Expr*> zc = {&Z.tau, &Z.xi, &Z.eta};
    std::vector<int> which = {0, 1, 2};
    if (Z.zeta) {
      zc.push_back(&*Z.zeta);
      which.push_back(3);
    }
    for (std::size_t ci = 0; ci < zc.size(); ++ci) {
      std::vector<C> row;
      row.reserve(basis.size());
      bool bad = false;
      for (const VectorField& B : basis) {
        Expr comp;
        switch (which[ci]) {
          case 0: comp = B.tau; break;
          case 1: comp = B.xi; break;
          case 2: comp = B.eta; break;
          default: comp = B.zeta ? *B.zeta : zero(); break;
        }
        try {
          row.push_back(eval(comp, val));
        } catch (const EvalError&) {
          bad = true;
          break;
        }
      }
      if (bad) continue;
      try {
        C rhs = eval(*zc[ci], val);
        A.push_back(std::move(row));
        b.push_back(rhs);
        scale = std::max(scale, std::abs(rhs));
      } catch (const EvalError&) {
      }
    }
  }
  if (A.size() < basis.size() + 2) return std::nullopt;
  double resid = 0;
  auto coeffs = least_squares<std::complex<double>>(A, b, &resid);
  if (resid > tol * (1.0 + scale)) return std::nullopt;
  return coeffs;
}

ClosureReport closure_check(const std::vector<VectorField>& basis, const DcEquation& eq,
                            bool system_mode, std::uint64_t seed, const SampleBox& box,
                            double tol) {
  ClosureReport rep;
  // instantiate functional families once for span purposes
  std::vector<VectorField> finite;
  std::vector<VectorField> family;
  for (const VectorField& B : basis) {
    if (B.functional == FunctionalKind::none)
      finite.push_back(B);
    else
      family.push_back(B);
  }
  std::vector<VectorField> inst;  // concrete family representatives
  for (const VectorField& F : family) {
    if (F.functional == FunctionalKind::h_tx)
      for (const Expr& h : heat_solutions_tx()) inst.push_back(instantiate_h(F, h));
    else
      for (const Expr& p : heat_solutions_tv()) inst.push_back(instantiate_phi(F, p));
  }
  auto check_symmetry = [&](const VectorField& Z) {
    double r = system_mode ? invariance_residual_system(Z, eq, 40, seed + 17, box)
                           : invariance_residual_scalar(Z, eq, 40, seed + 17, box);
    rep.worst_invariance = std::max(rep.worst_invariance, r);
    ++rep.pairs_invariance_checked;
    if (r > tol) rep.ok = false;
  };
  for (std::size_t i = 0; i < finite.size(); ++i) {
    for (std::size_t j = i + 1; j < finite.size(); ++j) {
      VectorField Z = commutator(finite[i], finite[j]);
      if (family.empty()) {
        auto fit = span_fit(finite, Z, box, seed + i * 31 + j, tol);
        ++rep.pairs_fitted;
        if (!fit) {
          rep.ok = false;
          rep.worst_fit = std::max(rep.worst_fit, 1.0);
        }
      } else {
        // spans of infinite algebras are checked through invariance
        check_symmetry(Z);
      }
    }
  }
  for (const VectorField& F : inst) {
    for (const VectorField& G : finite) check_symmetry(commutator(G, F));
    // family-family brackets
    for (const VectorField& F2 : inst) {
      if (&F2 == &F) continue;
      check_symmetry(commutator(F, F2));
      break;  // one representative pair is enough per family element
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Changes of variables / adjoint action

void PointChangeOfVariables::validate(const SampleBox& box, int samples, std::uint64_t seed) const {
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Valuation val;
    for (Var v : {Var::t, Var::x, Var::u, Var::v}) {
      auto it = box.vars.find(v);
      Range r = it != box.vars.end() ? it->second : box.var_default;
      val.set(v, rng.uniform(r.lo, r.hi));
    }
    Valuation img;
    try {
      img.set(Var::t, eval(fwd_t, val));
      img.set(Var::x, eval(fwd_x, val));
      img.set(Var::u, eval(fwd_u, val));
      if (fwd_v) img.set(Var::v, eval(*fwd_v, val));
      auto back_t = eval(inv_t, img);
      auto back_x = eval(inv_x, img);
      auto back_u = eval(inv_u, img);
      auto orig = [&](Var v) { return val.vars[static_cast<std::size_t>(v)]; };
      if (std::abs(back_t - orig(Var::t)) > 1e-8 || std::abs(back_x - orig(Var::x)) > 1e-8 ||
          std::abs(back_u - orig(Var::u)) > 1e-8)
        throw std::invalid_argument("change of variables: inverse does not match forward");
      if (fwd_v && inv_v) {
        auto back_v = eval(*inv_v, img);
        if (std::abs(back_v - orig(Var::v)) > 1e-8)
          throw std::invalid_argument("change of variables: inverse does not match forward (v)");
      }
    } catch (const EvalError&) {
      continue;
    }
  }
}

PointChangeOfVariables transform3(bool prolong_to_v) {
  PointChangeOfVariables C;
  Expr t = V(Var::t), x = V(Var::x), u = V(Var::u), v = V(Var::v);
  C.fwd_t = t;
  C.fwd_x = exp(x);
  C.fwd_u = mul(exp(neg(x)), u);
  C.inv_t = t;
  C.inv_x = ln(x);
  C.inv_u = mul(x, u);
  if (prolong_to_v) {
    C.fwd_v = v;
    C.inv_v = v;
  }
  return C;
}

PointChangeOfVariables pet_change(const PotentialEquivTransform& T) {
  T.check();
  PotentialEquivTransform R = invert(T);
  auto rows = [](const PotentialEquivTransform& P) {
    Expr t = V(Var::t), x = V(Var::x), u = V(Var::u), v = V(Var::v);
    struct Out {
      Expr t, x, v, u;
    } o;
    o.t = add(mul(constant(P.e1), t), constant(P.e2));
    o.x = add(add(mul(constant(P.ep1), x), mul(constant(P.ep2), v)),
              add(mul(constant(P.ep3), t), constant(P.ep4)));
    o.v = add(add(mul(constant(P.epp1), x), mul(constant(P.epp2), v)),
              add(mul(constant(P.epp3), t), constant(P.epp4)));
    o.u = div(add(constant(P.epp1), mul(constant(P.epp2), u)),
              add(constant(P.ep1), mul(constant(P.ep2), u)));
    return o;
  };
  auto f = rows(T);
  auto b = rows(R);
  PointChangeOfVariables C;
  C.fwd_t = normalize(f.t);
  C.fwd_x = normalize(f.x);
  C.fwd_u = normalize(f.u);
  C.fwd_v = normalize(f.v);
  C.inv_t = normalize(b.t);
  C.inv_x = normalize(b.x);
  C.inv_u = normalize(b.u);
  C.inv_v = normalize(b.v);
  return C;
}

PointChangeOfVariables identity_change(bool with_v) {
  PointChangeOfVariables C;
  C.fwd_t = C.inv_t = V(Var::t);
  C.fwd_x = C.inv_x = V(Var::x);
  C.fwd_u = C.inv_u = V(Var::u);
  if (with_v) {
    C.fwd_v = V(Var::v);
    C.inv_v = V(Var::v);
  }
  return C;
}

VectorField adjoint_action(const PointChangeOfVariables& C, const VectorField& X) {
  Subst back;
  back.vars[Var::t] = C.inv_t;
  back.vars[Var::x] = C.inv_x;
  back.vars[Var::u] = C.inv_u;
  if (C.inv_v) back.vars[Var::v] = *C.inv_v;
  VectorField out;
  out.tau = normalize(substitute(apply_field(X, C.fwd_t), back));
  out.xi = normalize(substitute(apply_field(X, C.fwd_x), back));
  out.eta = normalize(substitute(apply_field(X, C.fwd_u), back));
  if (C.fwd_v) out.zeta = normalize(substitute(apply_field(X, *C.fwd_v), back));
  out.functional = X.functional;
  return out;
}

VectorField project_to_txv(const VectorField& X) {
  VectorField out = X;
  out.eta = zero();
  if (!out.zeta) out.zeta = zero();
  return out;
}

std::optional<VectorField> project_to_txu(const VectorField& X) {
  if (depends_on(X.tau, Var::v) || depends_on(X.xi, Var::v) || depends_on(X.eta, Var::v))
    return std::nullopt;
  VectorField out;
  out.tau = X.tau;
  out.xi = X.xi;
  out.eta = X.eta;
  out.functional = X.functional;
  return out;
}

bool fields_equal(const VectorField& A, const VectorField& B, const SampleBox& box, double tol) {
  auto z = [&](const Expr& a, const Expr& b) {
    Expr d = sub(a, b);
    if (d.is_zero()) return true;
    return is_zero_numeric(d, box, 40, tol);
  };
  if (!z(A.tau, B.tau) || !z(A.xi, B.xi) || !z(A.eta, B.eta)) return false;
  Expr za = A.zeta ? *A.zeta : zero();
  Expr zb = B.zeta ? *B.zeta : zero();
  return z(za, zb);
}

}  // namespace dcsym
