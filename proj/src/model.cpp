#include "dcsym/model.hpp"

#include <stdexcept>

namespace dcsym {

namespace {

Expr U() { return variable(Var::u); }

}  // namespace

DcEquation DcEquation::from_dk(Expr d, Expr k) {
  DcEquation eq;
  eq.d = normalize(d);
  eq.k = normalize(k);
  return eq;
}

DcEquation DcEquation::from_dK(Expr d, Expr K) {
  DcEquation eq;
  eq.d = normalize(d);
  eq.K = normalize(K);
  return eq;
}

Expr convection_k(const DcEquation& eq) {
  if (eq.k) return *eq.k;
  if (eq.K) return normalize(neg(diff(*eq.K, Var::u)));
  throw std::invalid_argument("DcEquation without k or K");
}

// ---------------------------------------------------------------------------
// Primitive table

namespace {

// Tries to view `f` as one of the table shapes and integrate it in u.
std::optional<Expr> integrate_power_term(const Expr& f) {
  // peel numeric coefficient (normalized products keep it leftmost)
  Expr core = f;
  Expr coeff = constant(1);
  if (core.kind() == Kind::Binary && core.node().bop == BinOp::Mul) {
    Expr cur = core;
    while (cur.kind() == Kind::Binary && cur.node().bop == BinOp::Mul) cur = cur.node().a;
    if (cur.is_number()) {
      coeff = cur;
      core = normalize(div(core, cur));
    }
  } else if (core.is_number()) {
    return mul(core, U());
  }

  auto is_affine_u = [](const Expr& e) -> bool {
    if (e.kind() == Kind::Variable && e.node().var == Var::u) return true;
    if (e.kind() == Kind::Binary && e.node().bop == BinOp::Add) {
      Expr da = normalize(diff(e, Var::u));
      Expr rest = normalize(sub(e, U()));
      return da.is_one() && rest.is_number();
    }
    return false;
  };

  if (is_affine_u(core)) {
    return mul(coeff, mul(constant(1, 2), pow(core, constant(2))));
  }
  if (core.kind() == Kind::Binary && core.node().bop == BinOp::Pow) {
    Expr base = core.node().a;
    Expr expo = core.node().b;
    if (is_affine_u(base) && !depends_on(expo, Var::u)) {
      auto en = expo.number();
      if (en && en->exact && en->num == -1 && en->den == 1) return mul(coeff, ln(base));
      // symbolic exponents use the power rule; the exponent -1 pole is the
      // caller's responsibility when it is not the literal constant
      Expr p1 = add(expo, constant(1));
      return mul(coeff, div(pow(base, p1), p1));
    }
  }
  if (core.kind() == Kind::Unary && core.node().uop == UnOp::Ln && is_affine_u(core.node().a)) {
    Expr w = core.node().a;
    return mul(coeff, sub(mul(w, ln(w)), w));
  }
  if (core.kind() == Kind::Unary && core.node().uop == UnOp::Exp) {
    // c * e^(p*u + q)
    Expr arg = core.node().a;
    Expr p = normalize(diff(arg, Var::u));
    if (p.is_number() && !p.is_zero()) return mul(coeff, div(core, p));
  }
  if (core.kind() == Kind::Binary && core.node().bop == BinOp::Mul) {
    // c * u^(-2) * e^(s/u)  ->  -(c/s) e^(s/u)
    Expr a = core.node().a, b = core.node().b;
    auto pick = [&](const Expr& powpart, const Expr& exppart) -> std::optional<Expr> {
      if (!(powpart.kind() == Kind::Binary && powpart.node().bop == BinOp::Pow)) return std::nullopt;
      if (!(exppart.kind() == Kind::Unary && exppart.node().uop == UnOp::Exp)) return std::nullopt;
      Expr base = powpart.node().a;
      auto en = powpart.node().b.number();
      if (!(base.kind() == Kind::Variable && base.node().var == Var::u)) return std::nullopt;
      if (!en || !en->exact || en->num != -2 || en->den != 1) return std::nullopt;
      Expr arg = exppart.node().a;
      Expr s = normalize(mul(arg, U()));
      if (depends_on(s, Var::u) || !s.is_number()) return std::nullopt;
      return mul(coeff, mul(constant(-1), div(exppart, s)));
    };
    if (auto r = pick(a, b)) return r;
    if (auto r = pick(b, a)) return r;
  }
  return std::nullopt;
}

}  // namespace

Expr antiderivative_in_u(const Expr& f) {
  Expr n = normalize(f);
  if (n.is_zero()) return constant(0);
  std::vector<Expr> terms;
  if (n.kind() == Kind::Binary && n.node().bop == BinOp::Add) {
    Expr cur = n;
    while (cur.kind() == Kind::Binary && cur.node().bop == BinOp::Add) {
      terms.push_back(cur.node().b);
      cur = cur.node().a;
    }
    terms.push_back(cur);
  } else {
    terms.push_back(n);
  }
  Expr acc = constant(0);
  for (const Expr& term : terms) {
    auto r = integrate_power_term(term);
    if (!r) throw std::runtime_error("antiderivative outside primitive table: " + to_string(term));
    acc = add(acc, *r);
  }
  return acc;
}

DcEquation K_from_k(const DcEquation& eq) {
  if (!eq.k) throw std::invalid_argument("K_from_k: k missing");
  DcEquation out = eq;
  out.K = normalize(neg(antiderivative_in_u(*eq.k)));
  return out;
}

Expr scalar_residual(const DcEquation& eq) {
  Expr k = convection_k(eq);
  Expr du = diff(eq.d, Var::u);
  return normalize(sub(
      sub(sub(variable(Var::u_t), mul(eq.d, variable(Var::u_xx))),
          mul(du, pow(variable(Var::u_x), constant(2)))),
      mul(k, variable(Var::u_x))));
}

PotentialSystem potential_system(const DcEquation& eq) {
  DcEquation full = eq;
  if (!full.K) {
    if (!full.k) throw std::invalid_argument("potential_system: needs k or K");
    full = K_from_k(full);
  }
  if (!full.k) full.k = convection_k(full);
  PotentialSystem sys;
  sys.eq = full;
  sys.first = normalize(sub(variable(Var::v_x), U()));
  sys.second = normalize(add(sub(variable(Var::v_t), mul(full.d, variable(Var::u_x))), *full.K));
  return sys;
}

PotentialEquation potential_equation(const DcEquation& eq) {
  DcEquation full = eq;
  if (!full.K) full = K_from_k(full);
  Subst s;
  s.vars[Var::u] = variable(Var::v_x);
  Expr dv = substitute(full.d, s);
  Expr Kv = substitute(*full.K, s);
  PotentialEquation pe;
  pe.eq = full;
  pe.residual = normalize(add(sub(variable(Var::v_t), mul(dv, variable(Var::v_xx))), Kv));
  return pe;
}

void validate(const DcEquation& eq, const SampleBox& box) {
  if (is_zero_numeric(eq.d, box, 40, 1e-9)) throw std::invalid_argument("d(u) is identically zero");
  if (eq.k && eq.K) {
    Expr rel = add(diff(*eq.K, Var::u), *eq.k);
    if (!is_zero_numeric(rel, box, 60, 1e-9)) throw std::invalid_argument("K_u = -k violated");
  }
}

namespace {

Expr eliminate_t_impl(const Expr& e, const Expr& F, Var vt, Var vtx, Var vtxx, Var vtt,
                      Var jet0, Var jet1, Var jet2) {
  // F defines the first t-derivative over pure x-jets; its x-derivatives
  // and the chained t-derivative close the elimination.
  Expr Fx = total_derivative(F, Var::x);
  Expr Fxx = total_derivative(Fx, Var::x);
  Expr Ft = add(add(mul(diff(F, jet0), F), mul(diff(F, jet1), Fx)), mul(diff(F, jet2), Fxx));
  Subst s;
  s.vars[vt] = F;
  s.vars[vtx] = Fx;
  s.vars[vtxx] = Fxx;
  s.vars[vtt] = Ft;
  return substitute(e, s);
}

}  // namespace

Expr eliminate_u_t_derivatives(const Expr& e, const DcEquation& eq) {
  Expr k = convection_k(eq);
  Expr F = normalize(add(add(mul(eq.d, variable(Var::u_xx)),
                             mul(diff(eq.d, Var::u), pow(variable(Var::u_x), constant(2)))),
                         mul(k, variable(Var::u_x))));
  return eliminate_t_impl(e, F, Var::u_t, Var::u_tx, Var::u_txx, Var::u_tt, Var::u, Var::u_x,
                          Var::u_xx);
}

Expr eliminate_v_t_derivatives(const Expr& e, const DcEquation& eq) {
  DcEquation full = eq;
  if (!full.K) full = K_from_k(full);
  Subst s;
  s.vars[Var::u] = variable(Var::v_x);
  Expr F = normalize(sub(mul(substitute(full.d, s), variable(Var::v_xx)), substitute(*full.K, s)));
  return eliminate_t_impl(e, F, Var::v_t, Var::v_tx, Var::v_txx, Var::v_tt, Var::v, Var::v_x,
                          Var::v_xx);
}

}  // namespace dcsym
