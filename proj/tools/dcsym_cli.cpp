// Command-line surface: classification, transformation, table and solution
// verification, solution mapping and the linearization chain. Output is
// JSON lines (one result object per line); --pretty renders human tables.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include "dcsym/chain.hpp"
#include "dcsym/classify.hpp"
#include "dcsym/json_io.hpp"
#include "dcsym/solmap.hpp"

using namespace dcsym;

namespace {

struct CommonOpts {
  std::uint64_t seed = 20240601;
  double tol = 0;  // 0: per-check defaults
  bool pretty = false;
};

std::uint64_t env_seed() {
  const char* s = std::getenv("PET_ENGINE_SEED");
  if (!s) return 20240601;
  return std::strtoull(s, nullptr, 10);
}

void emit(const Json& j, bool pretty) {
  if (pretty)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << j.dump() << "\n";
}

DcEquation equation_from_flags(const std::string& d, const std::string& k, const std::string& K) {
  if (d.empty()) throw CLI::ValidationError("--d is required");
  DcEquation eq;
  eq.d = parse(d);
  if (!k.empty()) eq.k = parse(k);
  if (!K.empty()) eq.K = parse(K);
  if (!eq.k && !eq.K) throw CLI::ValidationError("one of --k / --K is required");
  return eq;
}

SampleBox case_box(const ClassificationCase& c) {
  SampleBox b;
  b.set(Var::u, c.u_range.lo, c.u_range.hi);
  return b;
}

std::vector<std::map<std::string, double>> case_params(const ClassificationCase& c,
                                                       std::uint64_t seed) {
  if (c.params.empty()) return {{}};
  std::vector<std::map<std::string, double>> out;
  Rng rng(seed ^ std::hash<std::string>{}(c.label));
  for (int i = 0; i < 2; ++i) {
    std::map<std::string, double> m;
    for (const auto& p : c.params) {
      Range r = c.param_box.count(p) ? c.param_box.at(p) : Range{0.3, 2.0};
      m[p] = rng.uniform(r.lo, r.hi);
    }
    out.push_back(std::move(m));
  }
  return out;
}

struct CaseResult {
  std::string label;
  std::vector<Json> lines;
  bool pass = true;
};

CaseResult verify_case(const ClassificationCase& c, const CommonOpts& opts) {
  const double tol = opts.tol > 0 ? opts.tol : 1e-8;
  CaseResult out;
  out.label = c.label;
  auto arbs = c.d_arbitrary() || c.kK_arbitrary()
                  ? (c.table == 1 ? arbitrary_instantiations_table1() : arbitrary_instantiations_table2())
                  : std::vector<std::pair<std::string, std::string>>{{"", ""}};
  int op_index = 0;
  for (const auto& op : c.basis) {
    double worst = 0;
    int samples = 0;
    for (const auto& [ad, akk] : arbs) {
      for (const auto& ps : case_params(c, opts.seed)) {
        DcEquation eq = c.equation(ps, ad.empty() ? "1+u^2" : ad, akk.empty() ? "u^3" : akk);
        auto run_one = [&](const VectorField& X) {
          double r = c.table == 1
                         ? invariance_residual_scalar(X, eq, 100, opts.seed + op_index, case_box(c))
                         : invariance_residual_system(X, eq, 100, opts.seed + op_index, case_box(c));
          worst = std::max(worst, r);
          samples += 100;
        };
        if (op.functional == FunctionalKind::h_tx) {
          for (const Expr& h : heat_solutions_tx()) run_one(instantiate_h(op.instantiate(ps), h));
        } else if (op.functional == FunctionalKind::phi_tv) {
          for (const Expr& p : heat_solutions_tv()) run_one(instantiate_phi(op.instantiate(ps), p));
        } else {
          run_one(op.instantiate(ps));
        }
      }
    }
    bool pass = worst < tol;
    out.pass = out.pass && pass;
    Json line;
    line["case"] = c.label;
    line["operator"] = op_index;
    line["max_residual"] = worst;
    line["samples"] = samples;
    line["pass"] = pass;
    out.lines.push_back(std::move(line));
    ++op_index;
  }
  return out;
}

int cmd_verify_tables(int table, const std::string& catalog_path, const CommonOpts& opts) {
  Catalog loaded;
  const Catalog* cat = &catalog();
  if (!catalog_path.empty()) {
    std::ifstream in(catalog_path);
    if (!in) {
      emit({{"error", "cannot open catalog file"}, {"path", catalog_path}}, opts.pretty);
      return 2;
    }
    Json j = Json::parse(in);
    loaded = catalog_from_json(j);
    cat = &loaded;
  }
  const auto& rows = table == 1 ? cat->table1 : cat->table2;
  std::vector<std::future<CaseResult>> futures;
  futures.reserve(rows.size());
  for (const auto& c : rows)
    futures.push_back(std::async(std::launch::async, verify_case, std::cref(c), std::cref(opts)));
  std::vector<CaseResult> results;
  results.reserve(rows.size());
  for (auto& f : futures) results.push_back(f.get());
  std::stable_sort(results.begin(), results.end(),
                   [](const CaseResult& a, const CaseResult& b) { return a.label < b.label; });
  bool all = true;
  std::string first_fail;
  for (const auto& r : results) {
    for (const auto& line : r.lines) {
      emit(line, opts.pretty);
      if (!line["pass"].get<bool>() && first_fail.empty())
        first_fail = line["case"].get<std::string>() + " operator " +
                     std::to_string(line["operator"].get<int>());
    }
    all = all && r.pass;
  }
  Json summary;
  summary["table"] = table;
  summary["cases"] = results.size();
  summary["pass"] = all;
  if (!all) summary["first_failure"] = first_fail;
  emit(summary, opts.pretty);
  return all ? 0 : 1;
}

int cmd_verify_solutions(int list, const CommonOpts& opts) {
  auto eq = DcEquation::from_dK(parse("u^(-1)"), parse("0"));
  bool all = true;
  auto one = [&](const CatalogSolution& s) {
    for (const auto& b : s.branches) {
      Json line;
      line["list"] = s.list;
      line["id"] = s.id;
      line["branch"] = b.label;
      bool pass = false;
      if (!s.u_tmpl.empty()) {
        auto f = instantiate(s, b);
        double r = verify_closed_form(eq, *f.closed_form, branch_grid(b), f.dom);
        double tol = opts.tol > 0 ? opts.tol : 1e-10;
        pass = r < tol;
        line["residual"] = r;
      } else {
        auto s8 = implicit_solution_8(b.constants.count("mu") ? b.constants.at("mu") : 1.0,
                                      branch_grid(b, 40, 40));
        auto rep = verify_fd(eq, s8.field, branch_grid(b, 40, 40), 0.02);
        double tol = opts.tol > 0 ? opts.tol : 1e-6;
        pass = rep.pass(tol) && s8.implicit_residual < 1e-8 && s8.invariance_residual < 1e-8;
        line["residual"] = rep.residual;
        line["fd_order"] = rep.order;
        line["implicit_residual"] = s8.implicit_residual;
      }
      line["pass"] = pass;
      all = all && pass;
      emit(line, opts.pretty);
    }
  };
  if (list == 9)
    for (const auto& s : catalog().solutions9) one(s);
  else if (list == 10)
    for (const auto& s : catalog().solutions10) one(s);
  else
    one(catalog().solution8);
  return all ? 0 : 1;
}

int cmd_map_solution(int list, const std::string& id, const std::string& branch,
                     const CommonOpts& opts) {
  const auto& arrows = list == 9 ? catalog().arrows9 : catalog().arrows10;
  const SolutionArrow* arrow = nullptr;
  for (const auto& a : arrows) {
    if (a.src_id != id) continue;
    if (!branch.empty() && a.src_branch != branch) continue;
    arrow = &a;
    break;
  }
  if (!arrow) {
    emit({{"error", "no catalog arrow for this source"}, {"list", list}, {"id", id}}, opts.pretty);
    return 2;
  }
  auto eq = DcEquation::from_dK(parse("u^(-1)"), parse("0"));
  const auto& src_sol = catalog().solution(list, arrow->src_id);
  const auto& dst_sol = catalog().solution(list, arrow->dst_id);
  const auto& sb = src_sol.branch(arrow->src_branch);
  const auto& db = dst_sol.branch(arrow->dst_branch);
  auto f = instantiate(src_sol, sb);
  auto img = hodograph_on_solution(eq, f, branch_grid(sb), true);
  auto target = instantiate(dst_sol, db);
  double tol = opts.tol > 0 ? opts.tol : 1e-6;
  auto m = match_up_to_x_translation(img.field, img.grid, target, arrow->reflected, tol);
  Json line;
  line["source"] = arrow->src_id;
  line["source_branch"] = arrow->src_branch;
  line["target"] = arrow->dst_id;
  line["target_branch"] = arrow->dst_branch;
  for (const auto& [name, value] : db.constants) line[name] = value;
  line["via"] = "hodograph";
  line["shift"] = m.shift;
  line["sup_error"] = m.sup_error;
  line["reflected"] = m.reflected;
  line["self_loop"] = arrow->self_loop;
  line["pass"] = m.ok;
  emit(line, opts.pretty);
  return m.ok ? 0 : 1;
}

int cmd_chain(bool with_complex, const CommonOpts& opts) {
  auto rep = run_linearization_chain(with_complex, 50);
  for (const auto& s : rep.stages) {
    Json line;
    line["stage"] = s.name;
    line["residual"] = s.residual;
    line["tolerance"] = s.tolerance;
    line["pass"] = s.pass;
    emit(line, opts.pretty);
  }
  Json summary;
  summary["links"] = rep.stages.size();
  summary["pass"] = rep.ok();
  emit(summary, opts.pretty);
  return rep.ok() ? 0 : 1;
}

int cmd_limits(double mu_prime, const CommonOpts& opts) {
  auto rep = note3_limit_check(mu_prime, {1e2, 1e3, 1e4});
  bool pass = rep.decreasing && rep.sup_error.back() < 1e-3;
  for (std::size_t i = 0; i < rep.nu.size(); ++i) {
    Json line;
    line["mu_prime"] = mu_prime;
    line["nu"] = rep.nu[i];
    line["sup_error"] = rep.sup_error[i];
    line["taylor_estimate"] = rep.taylor_estimate[i];
    emit(line, opts.pretty);
  }
  emit({{"decreasing", rep.decreasing}, {"pass", pass}}, opts.pretty);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic-numeric engine for diffusion-convection equivalence groups"};
  app.require_subcommand(1);
  app.fallthrough(true);  // global flags may follow the subcommand

  CommonOpts opts;
  opts.seed = env_seed();
  app.add_option("--seed", opts.seed, "random seed (fallback: PET_ENGINE_SEED)");
  app.add_option("--tol", opts.tol, "tolerance override");
  app.add_flag("--pretty", opts.pretty, "indent output for humans");
  bool json_flag = false;
  app.add_flag("--json", json_flag, "machine-readable output (default)");

  std::string d_str, k_str, K_str;
  int table = 0;

  auto* classify_cmd = app.add_subcommand("classify", "classify an equation against a table");
  classify_cmd->add_option("--d", d_str, "diffusivity d(u)");
  classify_cmd->add_option("--k", k_str, "convection k(u)");
  classify_cmd->add_option("--K", K_str, "conserved-form K(u)");
  classify_cmd->add_option("--table", table, "1 or 2 (default from k/K)");

  std::string via, params_json;
  double eps = 1.0;
  auto* transform_cmd = app.add_subcommand("transform", "apply an equivalence transform");
  transform_cmd->add_option("--d", d_str, "diffusivity d(u)")->required();
  transform_cmd->add_option("--k", k_str, "convection k(u)");
  transform_cmd->add_option("--K", K_str, "conserved-form K(u)");
  transform_cmd->add_option("--via", via, "hodograph | pp | point | conserved | potential")
      ->required();
  transform_cmd->add_option("--eps", eps, "parameter for --via pp");
  transform_cmd->add_option("--params", params_json, "JSON transform parameters");

  auto* verify_tables_cmd = app.add_subcommand("verify-tables", "re-verify a classification table");
  int vt_table = 1;
  std::string catalog_path;
  verify_tables_cmd->add_option("--table", vt_table, "1 or 2")->required();
  verify_tables_cmd->add_option("--catalog", catalog_path, "catalog JSON override");

  auto* verify_solutions_cmd = app.add_subcommand("verify-solutions", "re-verify exact solutions");
  int list = 9;
  verify_solutions_cmd->add_option("--list", list, "9, 10 or 8")->required();

  auto* map_cmd = app.add_subcommand("map-solution", "map a solution through the hodograph");
  std::string id, branch;
  int map_list = 9;
  map_cmd->add_option("--list", map_list, "9 or 10")->required();
  map_cmd->add_option("--id", id, "solution id in the list")->required();
  map_cmd->add_option("--branch", branch, "source branch label (default: first arrow)");
  std::string map_via = "hodograph";
  map_cmd->add_option("--via", map_via, "hodograph");

  auto* chain_cmd = app.add_subcommand("chain", "verify the linearization chain");
  bool with_complex = false;
  chain_cmd->add_flag("--with-complex", with_complex, "include the complex reduction link");

  auto* dump_cmd = app.add_subcommand("dump-catalog", "emit the embedded catalog as JSON");

  auto* limits_cmd = app.add_subcommand("limits", "exponential-as-power-limit report");
  double mu_prime = 1.0;
  limits_cmd->add_option("--mu", mu_prime, "exponent parameter mu'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed()) {
      auto eq = equation_from_flags(d_str, k_str, K_str);
      auto r = classify(eq, table);
      if (!r.ok) {
        emit({{"case", nullptr}, {"error", r.reason}}, opts.pretty);
        return 1;
      }
      Json line;
      line["case"] = r.label;
      for (const auto& [name, value] : r.params) line[name] = value;
      line["transform"] = transform_to_json(r.transform);
      emit(line, opts.pretty);
      return 0;
    }
    if (transform_cmd->parsed()) {
      auto eq = equation_from_flags(d_str, k_str, K_str);
      DcEquation out;
      Json applied;
      if (via == "hodograph") {
        out = apply_potential(hodograph(), eq);
        applied = {{"special", "hodograph"}};
      } else if (via == "pp") {
        out = apply_potential(purely_potential(eps), eq);
        applied = {{"special", "pp"}, {"eps", eps}};
      } else if (via == "point") {
        auto T = point_transform_from_json(Json::parse(params_json.empty() ? "{\"params\":{}}" : params_json));
        out = apply_point(T, eq);
        applied = transform_to_json(T);
      } else if (via == "conserved") {
        auto T = conserved_transform_from_json(Json::parse(params_json.empty() ? "{\"params\":{}}" : params_json));
        out = apply_conserved(T, eq);
        applied = transform_to_json(T);
      } else if (via == "potential") {
        auto T = potential_transform_from_json(Json::parse(params_json.empty() ? "{\"params\":{}}" : params_json));
        out = apply_potential(T, eq);
        applied = transform_to_json(T);
      } else if (via == "three") {
        emit({{"error", "transformation (3) acts outside the equivalence groups; it is validated "
                        "by jet pushforward (see the chain command), not as a (d,k) map"}},
             opts.pretty);
        return 2;
      } else {
        emit({{"error", "unknown --via"}}, opts.pretty);
        return 2;
      }
      Json line;
      line["input"] = equation_to_json(eq);
      line["via"] = applied;
      line["output"] = equation_to_json(out);
      emit(line, opts.pretty);
      return 0;
    }
    if (verify_tables_cmd->parsed()) return cmd_verify_tables(vt_table, catalog_path, opts);
    if (verify_solutions_cmd->parsed()) return cmd_verify_solutions(list, opts);
    if (map_cmd->parsed()) {
      if (map_via != "hodograph") {
        emit({{"error", "only --via hodograph maps catalog solutions"}}, opts.pretty);
        return 2;
      }
      return cmd_map_solution(map_list, id, branch, opts);
    }
    if (chain_cmd->parsed()) return cmd_chain(with_complex, opts);
    if (dump_cmd->parsed()) {
      std::cout << catalog_to_json(catalog()).dump(2) << "\n";
      return 0;
    }
    if (limits_cmd->parsed()) return cmd_limits(mu_prime, opts);
  } catch (const ParseError& e) {
    emit({{"error", std::string("expression parse error: ") + e.what()}}, false);
    return 2;
  } catch (const std::exception& e) {
    emit({{"error", e.what()}}, false);
    return 1;
  }
  return 2;
}
