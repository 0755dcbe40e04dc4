#include "soliton/checks.hpp"
#include "soliton/profile_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace soliton;

namespace {

struct Flags {
  std::string config_path;
  std::string out;
  std::optional<double> tol, r_max, eps_seed;
};

SuiteConfig load_config(const Flags& f) {
  SuiteConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("cannot open config '" + f.config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(f.config_path + ": " + e.what());
    }
    c = suite_config_from_json(j);
  }
  if (!f.out.empty()) c.out_dir = f.out;
  if (f.tol) c.tol = *f.tol;
  if (f.r_max) c.r_max = *f.r_max;
  if (f.eps_seed) c.eps_seed = *f.eps_seed;
  validate(c);
  return c;
}

SolitonProfile solve(const SuiteConfig& c) { return integrate(seed(c.eps_seed), c.r_max, c.tol); }

void print_results(const SuiteRun& run) {
  for (const CheckResult& r : run.results) {
    std::printf("%-14s %s", to_string(r.status).c_str(), r.id.c_str());
    if (!r.note.empty()) std::printf("  (%s)", r.note.c_str());
    std::printf("\n");
  }
  std::printf("%d pass, %d fail, %d measured-only\n", run.count(CheckStatus::pass),
              run.count(CheckStatus::fail), run.count(CheckStatus::measured_only));
}

void list_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for steady gradient Ricci solitons"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config_path, "JSON suite configuration");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--tol", flags.tol, "integrator relative tolerance");
  app.add_option("--rmax", flags.r_max, "integration radius");
  app.add_option("--eps-seed", flags.eps_seed, "series seed radius");

  auto* bryant = app.add_subcommand("bryant", "integrate the profile and save it as JSON");

  auto* levels = app.add_subcommand("levels", "level-set table (levels.csv)");
  std::string profile_path, spacing = "linear";
  double lmin = 1.0, lmax = 200.0;
  int lcount = 200;
  levels->add_option("--profile", profile_path, "saved profile instead of integrating");
  levels->add_option("--min", lmin);
  levels->add_option("--max", lmax);
  levels->add_option("--count", lcount);
  levels->add_option("--spacing", spacing)->check(CLI::IsMember({"linear", "log"}));

  auto* verify = app.add_subcommand("verify", "run checks: all, an id or an id prefix");
  std::string selector = "all";
  verify->add_option("check", selector);

  auto* asym = app.add_subcommand("asymptotics", "growth reports on a potential window");
  std::string window;
  asym->add_option("--window", window, "lambda window a:b");

  auto* pick = app.add_subcommand("pick", "point picking on a model");
  std::string model = "cigar-line";
  std::optional<double> rhat;
  std::optional<int> jmax;
  pick->add_option("--model", model)->check(CLI::IsMember({"cigar-line", "bryant"}));
  pick->add_option("--rhat", rhat);
  pick->add_option("--jmax", jmax);

  auto* report = app.add_subcommand("report", "full suite: report.json and all CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  SuiteConfig cfg;
  try {
    cfg = load_config(flags);
    if (!window.empty()) std::tie(cfg.window_min, cfg.window_max) = parse_window(window);
    if (rhat) cfg.rhat = {*rhat};
    if (jmax) cfg.pick_jmax = *jmax;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    if (*bryant) {
      IntegrateStats stats;
      SolitonProfile p = integrate(seed(cfg.eps_seed), cfg.r_max, cfg.tol, &stats);
      std::filesystem::create_directories(cfg.out_dir);
      auto path = cfg.out_dir / "profile.json";
      save_profile(p, path);
      std::printf("nodes %zu (rejected %ld), r_max %.6g, f(r_max) %.9g, max drift %.3e\n",
                  p.nodes().size(), stats.rejected, p.r_max(), p.f_max(), p.max_drift());
      std::printf("wrote %s\n", path.string().c_str());
      return 0;
    }
    if (*levels) {
      SolitonProfile p = profile_path.empty() ? solve(cfg) : load_profile(profile_path);
      if (!(lmin > 0.0 && lmax > lmin && lcount >= 2)) {
        std::fprintf(stderr, "config error: levels need 0 < min < max and count >= 2\n");
        return 2;
      }
      SuiteRun run;
      run.tables.levels = growth_tables(p, level_grid(lmin, lmax, lcount, spacing == "log")).rows;
      list_files(emit_plots(run, cfg.out_dir));
      return 0;
    }
    if (*verify || *report) {
      SuiteRun run = run_suite(cfg, *verify ? select_checks(selector) : std::vector<std::string>{});
      print_results(run);
      write_report(cfg, run);
      std::printf("wrote %s\n", (cfg.out_dir / "report.json").string().c_str());
      if (*report) list_files(emit_plots(run, cfg.out_dir));
      return run.any_fail() ? 1 : 0;
    }
    if (*asym) {
      SolitonProfile p = solve(cfg);
      SuiteRun run;
      run.tables.growth = asymptotic_constants(p, cfg.window_min, cfg.window_max);
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      for (const GrowthReport& g : run.tables.growth) out.push_back(to_json(g));
      std::printf("%s\n", out.dump(2).c_str());
      list_files(emit_plots(run, cfg.out_dir));
      return 0;
    }
    if (*pick) {
      ModelSpace m = model == "bryant" ? make_model(BryantNumeric{solve(cfg)})
                                       : make_model(CigarLine::from_rhat(cfg.rhat.front()));
      PickOptions opt;
      opt.mesh = cfg.mesh;
      PickOutcome outcome = pick_points(m, default_pick_schedule(), cfg.pick_jmax, opt);
      if (const auto* ref = std::get_if<PickRefusal>(&outcome)) {
        nlohmann::ordered_json j = {{"refusal", ref->reason},
                                    {"RD2_bound", ref->RD2_bound},
                                    {"first_half_max", ref->first_half_max},
                                    {"second_half_max", ref->second_half_max}};
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
      }
      const auto& seq = std::get<PickSequence>(outcome);
      PickAudit audit = audit_pick(CigarLine::from_rhat(cfg.rhat.front()), seq, cfg.mesh);
      nlohmann::ordered_json j = to_json(seq);
      j["audit"] = {{"a", audit.a}, {"b", audit.b}, {"c", audit.c}, {"d", audit.d},
                    {"blowup", audit.blowup}, {"worst_mesh_change", audit.worst_mesh_change},
                    {"failures", audit.failures}};
      std::printf("%s\n", j.dump(2).c_str());
      SuiteRun run;
      run.tables.pick = seq;
      list_files(emit_plots(run, cfg.out_dir));
      return audit.ok() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const WindowError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
