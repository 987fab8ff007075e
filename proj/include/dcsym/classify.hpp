#pragma once

// Classification of an equation against a table modulo the point
// (table 1) or conserved (table 2) equivalence action on (d, k/K).
// Family identification is numeric: d/d_u is fitted to the rational shape
// q(u) d_u = l(u) d with deg q <= 2, which covers every table family and is
// invariant under the affine substitutions the groups allow. Every candidate
// answer is verified by applying the normalizing transform and testing the
// result against the case template; a label is never returned unverified.

#include "dcsym/catalog.hpp"
#include "dcsym/equiv.hpp"

namespace dcsym {

struct ClassifyResult {
  bool ok = false;
  std::string label;
  std::map<std::string, double> params;        // bound mu / nu values
  ConservedEquivTransform transform;           // maps input to the canonical form
  std::string reason;                          // set when !ok
};

// table is 1 or 2. When 0, the table is chosen from what the equation
// carries (k -> 1, K -> 2).
ClassifyResult classify(const DcEquation& eq, int table = 0);

}  // namespace dcsym
