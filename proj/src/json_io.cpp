#include "dcsym/json_io.hpp"

namespace dcsym {

namespace {

Json expr_or_null(const std::optional<Expr>& e) {
  if (!e) return nullptr;
  return to_string(*e);
}

Json complex_json(std::complex<double> z) {
  if (z.imag() == 0.0) return z.real();
  Json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

std::complex<double> complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

Json equation_to_json(const DcEquation& eq) {
  Json j;
  j["d"] = to_string(eq.d);
  j["k"] = expr_or_null(eq.k);
  j["K"] = expr_or_null(eq.K);
  Json params = Json::object();
  auto add = [&](const Expr& e) {
    for (const auto& p : free_params(e)) params[p] = nullptr;
  };
  add(eq.d);
  if (eq.k) add(*eq.k);
  if (eq.K) add(*eq.K);
  j["params"] = params;
  return j;
}

DcEquation equation_from_json(const Json& j) {
  DcEquation eq;
  eq.d = parse(j.at("d").get<std::string>());
  if (j.contains("k") && !j["k"].is_null()) eq.k = parse(j["k"].get<std::string>());
  if (j.contains("K") && !j["K"].is_null()) eq.K = parse(j["K"].get<std::string>());
  return eq;
}

Json transform_to_json(const PointEquivTransform& T) {
  Json j;
  j["group"] = "point";
  j["params"] = {{"e1", T.e1}, {"e2", T.e2}, {"e3", T.e3}, {"e4", T.e4},
                 {"e5", T.e5}, {"e6", T.e6}, {"e7", T.e7}};
  return j;
}

Json transform_to_json(const ConservedEquivTransform& T) {
  Json j;
  j["group"] = "conserved";
  j["params"] = {{"e1", T.e1}, {"e2", T.e2}, {"e3", T.e3}, {"e4", T.e4},
                 {"e5", T.e5}, {"e6", T.e6}, {"e7", T.e7}, {"e8", T.e8}};
  return j;
}

Json transform_to_json(const PotentialEquivTransform& T) {
  Json j;
  j["group"] = "potential";
  j["params"] = {{"e1", complex_json(T.e1)},     {"e2", complex_json(T.e2)},
                 {"ep1", complex_json(T.ep1)},   {"ep2", complex_json(T.ep2)},
                 {"ep3", complex_json(T.ep3)},   {"ep4", complex_json(T.ep4)},
                 {"epp1", complex_json(T.epp1)}, {"epp2", complex_json(T.epp2)},
                 {"epp3", complex_json(T.epp3)}, {"epp4", complex_json(T.epp4)}};
  return j;
}

PointEquivTransform point_transform_from_json(const Json& j) {
  const Json& p = j.at("params");
  PointEquivTransform T;
  T.e1 = p.value("e1", 0.0);
  T.e2 = p.value("e2", 0.0);
  T.e3 = p.value("e3", 0.0);
  T.e4 = p.value("e4", 1.0);
  T.e5 = p.value("e5", 1.0);
  T.e6 = p.value("e6", 1.0);
  T.e7 = p.value("e7", 0.0);
  return T;
}

ConservedEquivTransform conserved_transform_from_json(const Json& j) {
  PointEquivTransform p = point_transform_from_json(j);
  ConservedEquivTransform T{p.e1, p.e2, p.e3, p.e4, p.e5, p.e6, p.e7, j.at("params").value("e8", 0.0)};
  return T;
}

PotentialEquivTransform potential_transform_from_json(const Json& j) {
  if (j.contains("special")) {
    std::string s = j["special"].get<std::string>();
    if (s == "hodograph") return hodograph();
    if (s == "pp") return purely_potential(j.value("eps", 1.0));
    if (s == "complex27") return complex_reduction_27();
    throw std::invalid_argument("unknown special transform: " + s);
  }
  const Json& p = j.at("params");
  PotentialEquivTransform T;
  auto get = [&](const char* name, std::complex<double> dflt) {
    return p.contains(name) ? complex_from(p[name]) : dflt;
  };
  T.e1 = get("e1", {1, 0});
  T.e2 = get("e2", {0, 0});
  T.ep1 = get("ep1", {1, 0});
  T.ep2 = get("ep2", {0, 0});
  T.ep3 = get("ep3", {0, 0});
  T.ep4 = get("ep4", {0, 0});
  T.epp1 = get("epp1", {0, 0});
  T.epp2 = get("epp2", {1, 0});
  T.epp3 = get("epp3", {0, 0});
  T.epp4 = get("epp4", {0, 0});
  return T;
}

namespace {

Json case_to_json(const ClassificationCase& c) {
  Json j;
  j["table"] = c.table;
  j["label"] = c.label;
  j["d"] = c.d_tmpl.empty() ? Json(nullptr) : Json(c.d_tmpl);
  j[c.table == 1 ? "k" : "K"] = c.kK_tmpl.empty() ? Json(nullptr) : Json(c.kK_tmpl);
  j["params"] = c.params;
  if (!c.constraint_note.empty()) j["constraints"] = c.constraint_note;
  Json basis = Json::array();
  for (const auto& op : c.basis) {
    Json b;
    b["tau"] = op.tau;
    b["xi"] = op.xi;
    b["eta"] = op.eta;
    if (!op.zeta.empty()) b["zeta"] = op.zeta;
    if (op.functional == FunctionalKind::h_tx) b["functional"] = "h(t,x)";
    if (op.functional == FunctionalKind::phi_tv) b["functional"] = "phi(t,v)";
    basis.push_back(std::move(b));
  }
  j["basis"] = basis;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

ClassificationCase case_from_json(const Json& j) {
  ClassificationCase c;
  c.table = j.at("table").get<int>();
  c.label = j.at("label").get<std::string>();
  const char* kk = c.table == 1 ? "k" : "K";
  if (!j.at("d").is_null()) c.d_tmpl = j["d"].get<std::string>();
  if (!j.at(kk).is_null()) c.kK_tmpl = j[kk].get<std::string>();
  for (const auto& p : j.value("params", Json::array())) {
    std::string name = p.get<std::string>();
    c.params.push_back(name);
    c.param_box[name] = {0.3, 2.0};
  }
  if (j.contains("constraints")) c.constraint_note = j["constraints"].get<std::string>();
  for (const auto& b : j.at("basis")) {
    BasisOp op;
    op.tau = b.value("tau", "0");
    op.xi = b.value("xi", "0");
    op.eta = b.value("eta", "0");
    op.zeta = b.value("zeta", "");
    std::string f = b.value("functional", "");
    if (f == "h(t,x)") op.functional = FunctionalKind::h_tx;
    if (f == "phi(t,v)") op.functional = FunctionalKind::phi_tv;
    c.basis.push_back(std::move(op));
  }
  if (j.contains("note")) c.note = j["note"].get<std::string>();
  return c;
}

Json solution_to_json(const CatalogSolution& s) {
  Json j;
  j["list"] = s.list;
  j["id"] = s.id;
  j["u"] = s.u_tmpl.empty() ? Json(nullptr) : Json(s.u_tmpl);
  j["provenance"] = s.provenance;
  Json bs = Json::array();
  for (const auto& b : s.branches) {
    Json bj;
    bj["label"] = b.label;
    bj["constants"] = b.constants;
    bj["domain"] = b.domain;
    bj["window"] = {{"t0", b.t0}, {"t1", b.t1}, {"x0", b.x0}, {"x1", b.x1}};
    bs.push_back(std::move(bj));
  }
  j["branches"] = bs;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

CatalogSolution solution_from_json(const Json& j) {
  CatalogSolution s;
  s.list = j.at("list").get<int>();
  s.id = j.at("id").get<std::string>();
  if (!j.at("u").is_null()) s.u_tmpl = j["u"].get<std::string>();
  s.provenance = j.value("provenance", "");
  for (const auto& bj : j.at("branches")) {
    SolutionBranch b;
    b.label = bj.at("label").get<std::string>();
    for (auto it = bj.at("constants").begin(); it != bj.at("constants").end(); ++it)
      b.constants[it.key()] = it.value().get<double>();
    b.domain = bj.value("domain", "");
    const Json& w = bj.at("window");
    b.t0 = w.at("t0").get<double>();
    b.t1 = w.at("t1").get<double>();
    b.x0 = w.at("x0").get<double>();
    b.x1 = w.at("x1").get<double>();
    s.branches.push_back(std::move(b));
  }
  if (j.contains("note")) s.note = j["note"].get<std::string>();
  return s;
}

Json arrow_to_json(const SolutionArrow& a) {
  Json j;
  j["list"] = a.list;
  j["source"] = {{"id", a.src_id}, {"branch", a.src_branch}};
  j["target"] = {{"id", a.dst_id}, {"branch", a.dst_branch}};
  j["self_loop"] = a.self_loop;
  j["reflected"] = a.reflected;
  return j;
}

SolutionArrow arrow_from_json(const Json& j) {
  SolutionArrow a;
  a.list = j.at("list").get<int>();
  a.src_id = j.at("source").at("id").get<std::string>();
  a.src_branch = j.at("source").at("branch").get<std::string>();
  a.dst_id = j.at("target").at("id").get<std::string>();
  a.dst_branch = j.at("target").at("branch").get<std::string>();
  a.self_loop = j.value("self_loop", false);
  a.reflected = j.value("reflected", false);
  return a;
}

}  // namespace

Json catalog_to_json(const Catalog& c) {
  Json j;
  j["version"] = 1;
  Json t1 = Json::array(), t2 = Json::array();
  for (const auto& cc : c.table1) t1.push_back(case_to_json(cc));
  for (const auto& cc : c.table2) t2.push_back(case_to_json(cc));
  j["table1"] = t1;
  j["table2"] = t2;
  Json gens = Json::array();
  for (const auto& g : c.pot_equiv_algebra)
    gens.push_back({{"tau", g.tau}, {"xi", g.xi}, {"eta", g.eta}, {"zeta", g.zeta},
                    {"d_dir", g.d_dir}, {"K_dir", g.K_dir}});
  j["pot_equiv_algebra"] = gens;
  Json s9 = Json::array(), s10 = Json::array();
  for (const auto& s : c.solutions9) s9.push_back(solution_to_json(s));
  for (const auto& s : c.solutions10) s10.push_back(solution_to_json(s));
  j["solutions9"] = s9;
  j["solutions10"] = s10;
  j["solution8"] = solution_to_json(c.solution8);
  Json a9 = Json::array(), a10 = Json::array();
  for (const auto& a : c.arrows9) a9.push_back(arrow_to_json(a));
  for (const auto& a : c.arrows10) a10.push_back(arrow_to_json(a));
  j["arrows9"] = a9;
  j["arrows10"] = a10;
  Json corr = Json::array();
  for (const auto& p : c.correspondences) corr.push_back({{"starred", p.starred}, {"point", p.point}});
  j["correspondences"] = corr;
  Json hp = Json::array();
  for (const auto& p : c.hodograph_pairs)
    hp.push_back({{"a", p.a}, {"b", p.b}, {"relation", p.relation}});
  j["hodograph_pairs"] = hp;
  Json l1 = Json::array();
  for (const auto& p : c.lemma1_pairs)
    l1.push_back({{"a", p.a}, {"b", p.b}, {"relation", p.relation}});
  j["lemma1_pairs"] = l1;
  Json red = Json::array();
  for (const auto& r : c.reductions)
    red.push_back({{"from", r.from}, {"to", r.to}, {"via", r.via}, {"k_scale", r.k_scale}});
  j["reductions"] = red;
  j["transcription_notes"] = c.transcription_notes;
  return j;
}

Catalog catalog_from_json(const Json& j) {
  Catalog c;
  for (const auto& cc : j.at("table1")) c.table1.push_back(case_from_json(cc));
  for (const auto& cc : j.at("table2")) c.table2.push_back(case_from_json(cc));
  for (const auto& g : j.value("pot_equiv_algebra", Json::array()))
    c.pot_equiv_algebra.push_back({g.value("tau", "0"), g.value("xi", "0"), g.value("eta", "0"),
                                   g.value("zeta", "0"), g.value("d_dir", "0"),
                                   g.value("K_dir", "0")});
  for (const auto& s : j.value("solutions9", Json::array())) c.solutions9.push_back(solution_from_json(s));
  for (const auto& s : j.value("solutions10", Json::array()))
    c.solutions10.push_back(solution_from_json(s));
  if (j.contains("solution8")) c.solution8 = solution_from_json(j["solution8"]);
  for (const auto& a : j.value("arrows9", Json::array())) c.arrows9.push_back(arrow_from_json(a));
  for (const auto& a : j.value("arrows10", Json::array())) c.arrows10.push_back(arrow_from_json(a));
  for (const auto& p : j.value("correspondences", Json::array()))
    c.correspondences.push_back({p.at("starred").get<std::string>(), p.at("point").get<std::string>()});
  for (const auto& p : j.value("hodograph_pairs", Json::array()))
    c.hodograph_pairs.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>(),
                                 p.value("relation", "")});
  for (const auto& p : j.value("lemma1_pairs", Json::array()))
    c.lemma1_pairs.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>(),
                              p.value("relation", "")});
  for (const auto& r : j.value("reductions", Json::array()))
    c.reductions.push_back({r.at("from").get<std::string>(), r.at("to").get<std::string>(),
                            r.value("via", ""), r.value("k_scale", 1.0)});
  for (const auto& n : j.value("transcription_notes", Json::array()))
    c.transcription_notes.push_back(n.get<std::string>());
  return c;
}

}  // namespace dcsym
