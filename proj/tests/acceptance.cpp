// One line per acceptance criterion over a full default suite run. Exit status is 0 only when
// the failing criteria are exactly the ones passed with --known-red.

#include "soliton/checks.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace soliton;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> checks;
};

const std::vector<Criterion> kCriteria = {
    {1, "profile construction and conserved quantity", {"bryant-construction"}},
    {2, "level-set det II integral decreasing", {"detII-decreasing"}},
    {3, "sectional curvature integral bounded", {"km-integral-bounded"}},
    {4, "Gauss-Bonnet closure on level sets", {"gauss-bonnet-closure"}},
    {5, "area linear, volume quadratic", {"area-linear-growth", "volume-quadratic-growth"}},
    {6, "coarea identities by finite differences",
     {"coarea-area-derivative", "coarea-flux-derivative", "coarea-volume"}},
    {7, "scalar curvature decreasing and decaying", {"scalar-curvature-decreasing"}},
    {8, "R times distance tends to a constant", {"curvature-decay-Rs"}},
    {9, "diameter/lambda decays, diameter ~ sqrt(s)",
     {"diameter-ratio-decay", "diameter-sqrt-growth"}},
    {10, "R D^2 tends to a constant", {"curvature-diameter-constant"}},
    {11, "potential affine family and rigidity",
     {"potential-affine-family", "potential-rigidity"}},
    {12, "cylinder slice extinction", {"cylinder-slice-extinction"}},
    {13, "angle obstruction on R x cigar", {"angle-obstruction"}},
    {14, "f/s sandwich on the profile", {"sandwich-bryant"}},
    {15, "Bishop-Gromov ratio monotone", {"bishop-gromov-monotone"}},
    {16, "point picking on R x cigar, refusal on the profile",
     {"point-picking-cigar-line", "point-picking-bryant-refusal"}},
    {17, "diameter drop bound", {"diameter-drop-bound"}},
    {18, "homothety covariance", {"homothety-covariance"}},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--known-red" && i + 1 < argc) {
      known_red.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-red N]...\n");
      return 2;
    }
  }

  SuiteRun run = run_suite(SuiteConfig{});
  std::map<std::string, const CheckResult*> by_id;
  for (const CheckResult& r : run.results) by_id[r.id] = &r;

  std::set<int> red;
  for (const Criterion& c : kCriteria) {
    bool ok = true;
    std::string detail;
    for (const std::string& id : c.checks) {
      auto it = by_id.find(id);
      // Every criterion needs a decided check; measured-only counts as not passing here.
      bool pass = it != by_id.end() && it->second->status == CheckStatus::pass;
      ok = ok && pass;
      if (!pass) {
        detail += " " + id + "=" +
                  (it == by_id.end() ? std::string("missing") : to_string(it->second->status));
        if (it != by_id.end() && !it->second->note.empty()) detail += " (" + it->second->note + ")";
      }
    }
    if (!ok) red.insert(c.number);
    std::printf("criterion %2d %s  %s%s%s\n", c.number, ok ? "PASS" : "FAIL", c.title.c_str(),
                detail.empty() ? "" : " :", detail.c_str());
  }

  bool as_expected = red == known_red;
  std::printf("%zu/%zu criteria pass; failing set %s the known-red set\n",
              kCriteria.size() - red.size(), kCriteria.size(),
              as_expected ? "matches" : "DOES NOT match");
  return as_expected ? 0 : 1;
}
