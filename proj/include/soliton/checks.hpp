#pragma once

#include "soliton/asymptotics.hpp"
#include "soliton/level_mesh.hpp"
#include "soliton/levelset.hpp"
#include "soliton/point_picking.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soliton {

enum class CheckStatus { pass, fail, measured_only };

std::string to_string(CheckStatus status);

struct CheckResult {
  std::string id;
  std::string statement;  // the formula the check exercises
  CheckStatus status = CheckStatus::fail;
  nlohmann::ordered_json measured = nlohmann::ordered_json::object();
  nlohmann::ordered_json expected = nlohmann::ordered_json::object();
  double tolerance = 0;
  std::string note;
  long long runtime_ms = 0;  // serialized only when timings are requested
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  double r_max = 240.0;
  double tol = 1e-10;
  double eps_seed = 1e-4;
  double window_min = 50.0, window_max = 200.0;
  double level_min = 1.0, level_max = 200.0;
  int level_count = 200;
  std::vector<double> rhat{0.5};
  int pick_jmax = 6;
  CapMeshOptions mesh{};
  std::filesystem::path out_dir = "lab-out";
  bool timings = false;

  /// Tolerances of the construction checks scale with tol relative to the default 1e-10.
  double tol_scale() const { return std::max(1.0, tol / 1e-10); }
};

/// Keys: r_max, tol, eps_seed, window "a:b" or [a, b], levels {min, max, count}, rhat [..], pick_jmax,
/// mesh {n_sigma, n_theta, stencil}, out_dir, timings. Unknown keys and invalid values throw
/// ConfigError.
SuiteConfig suite_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SuiteConfig& config);
void validate(const SuiteConfig& config);

/// "a:b" with 0 < a < b.
std::pair<double, double> parse_window(const std::string& text);

struct CheckInfo {
  std::string id;
  std::string statement;
  std::vector<std::string> needs;  // shared resources: "bryant", "homothety"
};

/// Every registered check, ordered by id.
const std::vector<CheckInfo>& check_registry();

/// Ids matching a selector: "all", an exact id, or an id prefix. Throws ConfigError when
/// nothing matches.
std::vector<std::string> select_checks(const std::string& selector);

/// Tables produced along the way for the CSV files.
struct SuiteTables {
  std::vector<LevelSetRecord> levels;
  std::vector<GrowthReport> growth;
  std::vector<AngleSample> angles;
  double angle_rhat = 0;
  std::optional<SliceEvolution> slices;
  std::optional<PickSequence> pick;
};

struct SuiteRun {
  std::vector<CheckResult> results;  // ordered by id
  SuiteTables tables;
  std::optional<SolitonProfile> profile;
  int count(CheckStatus status) const;
  bool any_fail() const { return count(CheckStatus::fail) > 0; }
};

/// Runs the selected checks (all when empty). The Bryant profile is solved once and shared;
/// checks run concurrently after that. A failed solve fails only the checks that need it.
SuiteRun run_suite(const SuiteConfig& config, const std::vector<std::string>& ids = {});

nlohmann::ordered_json to_json(const CheckResult& result, bool with_timing);
nlohmann::ordered_json to_json(const PickSequence& seq);  // infinite delta becomes null
nlohmann::ordered_json to_json(const GrowthReport& report);
nlohmann::ordered_json report_json(const SuiteConfig& config, const SuiteRun& run);

/// Writes report.json into config.out_dir.
void write_report(const SuiteConfig& config, const SuiteRun& run);

/// levels.csv, growth.csv, angles.csv, slices.csv, pick.csv for the tables present.
/// Returns the files written. IO errors throw std::runtime_error with the OS message.
std::vector<std::filesystem::path> emit_plots(const SuiteRun& run,
                                              const std::filesystem::path& dir);

}  // namespace soliton
