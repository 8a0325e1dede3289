// One line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <string>
#include <vector>

#include "nlbc/verify.hpp"

using namespace nlbc;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<std::string> suites;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "SBP identity residuals for orders 2, 4, 6", {"sbp"}},
      {2, "rotated boundary forms equal the flux forms", {"rotations"}},
      {3, "admissible R, S bound the boundary term; CEE Dirichlet rejected", {"lemma4"}},
      {4, "semi-discrete energy rate identity", {"energy-rate"}},
      {5, "energy bound held by admissible runs, broken by the violating preset", {"bounds"}},
      {6, "Psi sign switch at the Mach root", {"psi"}},
      {7, "strong and weak imposition agree on satisfied states", {"roundtrip"}},
      {8, "manufactured-solution convergence rates", {"convergence"}},
  };
  VerifyOptions opt;
  int failed = 0;
  for (const auto& c : criteria) {
    int checks = 0, bad = 0;
    std::string first;
    for (const auto& s : c.suites) {
      for (const auto& r : run_verify(s, opt)) {
        ++checks;
        if (!r.pass) {
          if (bad++ == 0) first = r.name + " (" + r.detail + ")";
        }
      }
    }
    const bool pass = checks > 0 && bad == 0;
    if (!pass) ++failed;
    std::printf("criterion %d: %s  %s  [%d checks%s%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, checks,
                bad ? ", first failure: " : "", first.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
