#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsym/chain.hpp"

using namespace dcsym;

TEST_CASE("linearization chain end to end") {
  auto rep = run_linearization_chain(true, 30);
  for (const auto& s : rep.stages) {
    CAPTURE(s.name);
    CAPTURE(s.residual);
    CHECK(s.pass);
  }
  CHECK(rep.ok());
  CHECK(rep.stages.size() == 9);
}
