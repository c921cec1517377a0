// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "cbsets/suites.hpp"

using namespace cbsets;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<const char*> suites;
  double limit_s;  // 0: no time bound of its own
};

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 7;
  const std::vector<Criterion> criteria = {
      {1, "hereditary: A in [1..12], ten levels, f in {id, 2k, 4^k}", {"family.hereditary"}, 60},
      {2, "f-monotonicity and fundamental-sequence inclusion chains", {"family.monotone"}, 60},
      {3, "greedy split = exhaustive minimum, gamma in {0,1,2}", {"family.greedy"}, 0},
      {4, "p-iteration reaches b(beta,n)+1 within 10^4 steps", {"ordinal.p_iteration"}, 0},
      {5, "coherence condition on the bounded CNF universe", {"ordinal.bachmann"}, 0},
      {6, "Schreier ranks min A - |A|, two ways; rank of {} >= 8", {"cbrank.schreier"}, 0},
      {7, "extraction on A^id_1 / [1..30] and A^id_2 / [1..24], verified", {"cbrank.extract"}, 120},
      {8, "Luxemburg vs closed forms; weak-l2 fundamental values", {"seqspace.luxemburg", "seqspace.fundamental"}, 0},
      {9, "norming sandwich for weak-l2, nmax=8, Nsupp=20", {"blocks.norming"}, 0},
      {10, "Phi(x chi_A) <= 2a f(min A)/f(min supp x)^2, beta in {1,2,3,w}", {"blocks.phibound"}, 0},
      {11, "witness for M=t^2 (j=33); none for LogSquare", {"blocks.witness"}, 0},
      {12, "levels e^{-n/2} for LogSquare; delta(t^2, 1, 0.5) = 0.05", {"seqspace.levels"}, 0},
      {13, "discretization of finite A containing 0", {"seqspace.discrete"}, 0},
  };

  int failed = 0;
  double total = 0;
  for (const auto& c : criteria) {
    std::size_t checked = 0, bad = 0;
    std::string first;
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* name : c.suites) {
      const SuiteResult r = run_suite(name, seed);
      checked += r.checked;
      bad += r.failed;
      if (r.first_failure && first.empty()) first = std::string(name) + ": " + *r.first_failure;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += secs;
    const bool slow = c.limit_s > 0 && secs > c.limit_s;
    const bool ok = bad == 0 && checked > 0 && !slow;
    if (!ok) ++failed;
    std::printf("criterion %2d: %s  %s  [checked=%zu failed=%zu %.2fs%s]", c.id, ok ? "PASS" : "FAIL", c.title, checked,
                bad, secs, slow ? " over time limit" : "");
    if (!first.empty()) std::printf("  first failure: %s", first.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed in %.1fs\n", int(criteria.size()) - failed, criteria.size(), total);
  return failed == 0 ? 0 : 1;
}
