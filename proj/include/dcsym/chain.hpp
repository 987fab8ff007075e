#pragma once

// The linearization chain: the hodograph links between the potential cases,
// the exponential change of variables between the two u^-2 scalar cases, and
// the end-to-end Cole-Hopf-style transport of a Burgers solution onto a
// caloric function.

#include "dcsym/pushforward.hpp"
#include "dcsym/solmap.hpp"

namespace dcsym {

struct ChainStage {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ChainReport {
  std::vector<ChainStage> stages;
  bool ok() const {
    for (const auto& s : stages)
      if (!s.pass) return false;
    return !stages.empty();
  }
};

ChainReport run_linearization_chain(bool with_complex = false, int grid_n = 50);

}  // namespace dcsym
