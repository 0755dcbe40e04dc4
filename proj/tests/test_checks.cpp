#include "doctest.h"

#include "soliton/checks.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace soliton;

namespace {

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
  SuiteConfig c = suite_config_from_json(
      {{"r_max", 100.0}, {"window", "20:80"}, {"levels", {{"min", 2.0}, {"max", 50.0}, {"count", 10}}}});
  CHECK(c.r_max == 100.0);
  CHECK(c.window_min == 20.0);
  CHECK(c.window_max == 80.0);
  CHECK(c.level_count == 10);
  CHECK_THROWS_AS(suite_config_from_json({{"tolerance", 1e-10}}), ConfigError);
  CHECK_THROWS_AS(suite_config_from_json({{"r_max", "far"}}), ConfigError);
  CHECK_THROWS_AS(suite_config_from_json({{"tol", 1e-2}}), ConfigError);
  CHECK_THROWS_AS(suite_config_from_json({{"levels", {{"count", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_window("80:20"), ConfigError);
  CHECK_THROWS_AS(parse_window("abc"), ConfigError);
  CHECK(parse_window("1.5:3") == std::pair{1.5, 3.0});
  // to_json and back is the identity.
  SuiteConfig back = suite_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("registry is sorted and selectors resolve") {
  const auto& reg = check_registry();
  CHECK(reg.size() == 30);
  CHECK(std::is_sorted(reg.begin(), reg.end(),
                       [](const CheckInfo& a, const CheckInfo& b) { return a.id < b.id; }));
  CHECK(select_checks("all").size() == reg.size());
  CHECK(select_checks("coarea-").size() == 3);
  CHECK(select_checks("sandwich-bryant") == std::vector<std::string>{"sandwich-bryant"});
  CHECK_THROWS_AS(select_checks("no-such-check"), ConfigError);
}

TEST_CASE("model-only checks pass and reports are deterministic") {
  SuiteConfig c;
  auto ids = select_checks("potential-");
  ids.push_back("cylinder-slice-extinction");
  ids.push_back("curve-limits-cigar-line");
  SuiteRun a = run_suite(c, ids), b = run_suite(c, ids);
  REQUIRE(a.results.size() == 4);
  for (const CheckResult& r : a.results) CHECK_MESSAGE(r.status == CheckStatus::pass, r.id);
  CHECK(report_json(c, a).dump() == report_json(c, b).dump());
  CHECK_FALSE(a.profile.has_value());

  auto j = to_json(a.results.front(), false);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"check_id", "statement", "status", "measured",
                                         "expected", "tolerance"});
  CHECK(to_json(a.results.front(), true).contains("runtime_ms"));
}

TEST_CASE("a short integration range leaves window checks measured-only") {
  SuiteConfig c;
  c.r_max = 20.0;
  SuiteRun run = run_suite(c, {"scalar-curvature-decreasing", "area-linear-growth",
                               "gauss-bonnet-closure"});
  for (const CheckResult& r : run.results) {
    if (r.id == "gauss-bonnet-closure") continue;
    CHECK_MESSAGE(r.status == CheckStatus::measured_only, r.id);
    CHECK(r.note.find("r_max") != std::string::npos);
  }
  CHECK_FALSE(run.any_fail());
}

TEST_CASE("emit_plots writes the CSV files with their headers") {
  SuiteConfig c;
  SuiteRun run = run_suite(c, {"cylinder-slice-extinction", "angle-obstruction"});
  auto dir = std::filesystem::temp_directory_path() / "soliton_plots_test";
  std::filesystem::remove_all(dir);
  auto files = emit_plots(run, dir);
  CHECK(files.size() == 2);
  CHECK(first_line(dir / "slices.csv") == "tau,area,dA_dtau,half_total_R,extinct");
  CHECK(first_line(dir / "angles.csv") == "rhat,sigma,s,cos_theta,grad_norm,lhs,rhs,length");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_plots(run, "/proc/definitely/not/writable"), std::runtime_error);
}

TEST_CASE("traceability table matches the registry") {
  std::ifstream in(std::string(SOLITON_DOCS_DIR) + "/traceability.md");
  REQUIRE(in);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("| `", 0) != 0) continue;
    auto id_end = line.find("` | ");
    std::string id = line.substr(3, id_end - 3);
    std::string rest = line.substr(id_end + 4);
    std::string statement = rest.substr(0, rest.rfind(" | "));
    for (std::size_t pos; (pos = statement.find("\\|")) != std::string::npos;)
      statement.replace(pos, 2, "|");
    rows.emplace_back(id, statement);
  }
  const auto& reg = check_registry();
  REQUIRE(rows.size() == reg.size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    CHECK(rows[i].first == reg[i].id);
    CHECK(rows[i].second == reg[i].statement);
  }
}
