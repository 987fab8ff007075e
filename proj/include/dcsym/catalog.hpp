#pragma once

// Machine-readable transcription of the classification tables, the
// equivalence-algebra generator list, exact-solution lists with domains,
// the hodograph arrow diagrams, and the case-correspondence data.

#include <map>
#include <string>
#include <vector>

#include "dcsym/model.hpp"
#include "dcsym/parse.hpp"
#include "dcsym/vfield.hpp"

namespace dcsym {

struct BasisOp {
  std::string tau = "0", xi = "0", eta = "0", zeta;  // zeta empty => field on (t,x,u)
  FunctionalKind functional = FunctionalKind::none;

  VectorField instantiate(const std::map<std::string, double>& params) const;
};

struct ClassificationCase {
  int table = 1;
  std::string label;            // "1.5", "2.8*", "2.10"
  std::string d_tmpl;           // empty means arbitrary
  std::string kK_tmpl;          // k for table 1, K for table 2; empty = arbitrary
  std::vector<std::string> params;               // subset of {"mu","nu"}
  std::map<std::string, Range> param_box;        // safe sampling ranges
  std::string constraint_note;                   // verbatim side conditions
  std::vector<BasisOp> basis;
  Range u_range{0.3, 2.7};
  std::string note;  // transcription annotations (suspected source typos)

  bool d_arbitrary() const { return d_tmpl.empty(); }
  bool kK_arbitrary() const { return kK_tmpl.empty(); }

  // Equation with mu/nu (and arbitrary slots) bound to concrete values.
  DcEquation equation(const std::map<std::string, double>& params,
                      const std::string& arb_d = "1+u^2",
                      const std::string& arb_kK = "u^3") const;
};

struct SolutionBranch {
  std::string label;                       // "eps1", "mu0", "main", ...
  std::map<std::string, double> constants; // eps / mu values
  std::string domain;                      // predicate text, empty = all
  double t0 = 0.3, t1 = 1.0, x0 = -1.0, x1 = 1.0;  // verification window
};

struct CatalogSolution {
  int list = 9;          // 9, 10, or 8
  std::string id;        // "1".."7" / "1".."6" / "8"
  std::string u_tmpl;    // closed form; empty for the implicit solution 8
  std::string provenance;  // "lie" or "nonclassical"
  std::vector<SolutionBranch> branches;
  std::string note;

  const SolutionBranch& branch(const std::string& label) const;
};

struct SolutionArrow {
  int list = 9;
  std::string src_id, src_branch;
  std::string dst_id, dst_branch;
  bool self_loop = false;
  bool reflected = false;  // target matched after x -> -x
};

// How one case reduces to another (section-4 chains).
struct CaseReduction {
  std::string from, to;
  std::string via;       // "hodograph" | "pp1" (transformation (6), eps=1)
  double k_scale = 1.0;  // conserved normalizer: K -> k_scale * K afterwards
};

struct StarredPair {  // hodograph-equivalent starred pairs and Lemma-1 pairs
  std::string a, b;
  std::string relation;  // "mu+mu'=-2", ...
};

struct Correspondence {  // starred case <-> table-1 case
  std::string starred, point;  // "2.5*", "1.5"
};

struct EquivGenerator {  // section-3 generator list of the equivalence algebra
  std::string tau, xi, eta, zeta, d_dir, K_dir;
};

struct Catalog {
  std::vector<ClassificationCase> table1;
  std::vector<ClassificationCase> table2;
  std::vector<EquivGenerator> pot_equiv_algebra;
  std::vector<CatalogSolution> solutions9;
  std::vector<CatalogSolution> solutions10;
  CatalogSolution solution8;
  std::vector<SolutionArrow> arrows9;
  std::vector<SolutionArrow> arrows10;
  std::vector<Correspondence> correspondences;
  std::vector<StarredPair> hodograph_pairs;   // starred pairs under (7)
  std::vector<StarredPair> lemma1_pairs;      // table-1 pairs under (7)
  std::vector<CaseReduction> reductions;
  std::vector<std::string> transcription_notes;

  const ClassificationCase& find(const std::string& label) const;
  const CatalogSolution& solution(int list, const std::string& id) const;
};

const Catalog& catalog();

// Instantiations used to test "arbitrary" table entries.
std::vector<std::pair<std::string, std::string>> arbitrary_instantiations_table1();
std::vector<std::pair<std::string, std::string>> arbitrary_instantiations_table2();

}  // namespace dcsym
