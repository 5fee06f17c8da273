// One line per acceptance criterion: the suite behind it, its verdict and
// the wall time against the allowed limit.

#include <cstdio>
#include <exception>

#include "gowlab/lab/verify.hpp"

using namespace gowlab::lab;

namespace {

struct Criterion {
  int id;
  const char* suite;
  double limit_s;
};

constexpr Criterion kCriteria[] = {
    {1, "fiber-identity", 10},  {2, "cube-count", 60}, {3, "sigma-representation", 30},
    {4, "norm-methods", 60},    {5, "norm-axioms", 60}, {6, "families", 120},
    {7, "selection", 120},      {8, "increment", 30},  {9, "bounds", 10},
    {10, "counterexamples", 60},
};

}  // namespace

int main() {
  int failed = 0;
  for (const auto& c : kCriteria) {
    bool ok = false;
    try {
      const auto r = run_verify(c.suite, 0);
      const bool in_time = r.seconds < c.limit_s;
      ok = r.pass && in_time;
      double worst = 0;
      for (const auto& k : r.checks) {
        if (k.tolerance > 0) worst = std::max(worst, k.residual / k.tolerance);
      }
      std::printf("criterion %2d %-21s %s  %zu checks, %zu failed, worst residual/tol %.3g, %.2f s (limit %.0f s)\n",
                  c.id, c.suite, ok ? "PASS" : "FAIL", r.checks.size(), r.failures(), worst, r.seconds,
                  c.limit_s);
      for (const auto& k : r.checks) {
        if (!k.pass) {
          std::printf("    failed: %s residual %.6g tolerance %.3g %s\n", k.name.c_str(), k.residual,
                      k.tolerance, k.detail.c_str());
        }
      }
      if (!in_time) std::printf("    over the time limit\n");
    } catch (const std::exception& e) {
      std::printf("criterion %2d %-21s FAIL  threw: %s\n", c.id, c.suite, e.what());
    }
    std::fflush(stdout);
    failed += !ok;
  }
  std::printf("%d of %zu criteria passed\n", int(std::size(kCriteria)) - failed, std::size(kCriteria));
  return failed == 0 ? 0 : 1;
}
