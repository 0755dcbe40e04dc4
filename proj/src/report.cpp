#include "soliton/checks.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace soliton {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class... T>
std::string row(const T&... values) {
  std::string out;
  ((out += (out.empty() ? "" : ",") + fmt(static_cast<double>(values))), ...);
  return out + '\n';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": " + std::strerror(errno));
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error(path.string() + ": write failed: " + std::strerror(errno));
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
}

// JSON has no infinity; an unbounded value is written as null.
nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const CheckResult& r, bool with_timing) {
  nlohmann::ordered_json j = {{"check_id", r.id},
                              {"statement", r.statement},
                              {"status", to_string(r.status)},
                              {"measured", r.measured},
                              {"expected", r.expected},
                              {"tolerance", r.tolerance}};
  if (!r.note.empty()) j["note"] = r.note;
  if (with_timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

nlohmann::ordered_json report_json(const SuiteConfig& config, const SuiteRun& run) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckResult& r : run.results) checks.push_back(to_json(r, config.timings));
  return {{"config", to_json(config)},
          {"summary",
           {{"checks", run.results.size()},
            {"pass", run.count(CheckStatus::pass)},
            {"fail", run.count(CheckStatus::fail)},
            {"measured_only", run.count(CheckStatus::measured_only)}}},
          {"checks", checks}};
}

void write_report(const SuiteConfig& config, const SuiteRun& run) {
  make_dir(config.out_dir);
  auto path = config.out_dir / "report.json";
  auto out = open_out(path);
  out << report_json(config, run).dump(2) << '\n';
  close_out(out, path);
}

std::vector<std::filesystem::path> emit_plots(const SuiteRun& run, const std::filesystem::path& dir) {
  make_dir(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, auto&& body) {
    auto path = dir / name;
    auto out = open_out(path);
    body(out);
    close_out(out, path);
    written.push_back(path);
  };
  const SuiteTables& t = run.tables;
  if (!t.levels.empty())
    emit("levels.csv", [&](std::ostream& out) { write_levels_csv(out, t.levels, true); });
  if (!t.growth.empty())
    emit("growth.csv", [&](std::ostream& out) {
      out << "quantity,lambda,value\n";
      for (const GrowthReport& g : t.growth)
        for (auto [lambda, value] : g.samples) out << g.name << ',' << row(lambda, value);
    });
  if (!t.angles.empty())
    emit("angles.csv", [&](std::ostream& out) {
      out << "rhat,sigma,s,cos_theta,grad_norm,lhs,rhs,length\n";
      for (const AngleSample& a : t.angles)
        out << row(t.angle_rhat, a.sigma, a.s, a.cos_theta, a.grad_norm, a.lhs, a.rhs, a.length);
    });
  if (t.slices)
    emit("slices.csv", [&](std::ostream& out) {
      out << "tau,area,dA_dtau,half_total_R,extinct\n";
      for (const SlicePoint& s : t.slices->series)
        out << row(s.tau, s.area, s.dA_dtau, s.half_total_R, s.extinct ? 1 : 0);
    });
  if (t.pick)
    emit("pick.csv", [&](std::ostream& out) {
      out << "j,eps,A,sigma_j,level,s,r,delta,R,D,distance,lambda,r2R,RD2\n";
      for (const PickedPoint& q : t.pick->points)
        out << row(q.j, q.eps, q.A, q.sigma_j, q.level, q.s, q.r, q.delta, q.R, q.D, q.distance,
                   q.lambda, q.r2R(), q.RD2());
    });
  return written;
}

nlohmann::ordered_json to_json(const PickSequence& seq) {
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const PickedPoint& q : seq.points)
    pts.push_back({{"j", q.j},         {"eps", q.eps},     {"A", q.A},
                   {"sigma_j", q.sigma_j}, {"level", q.level}, {"s", q.s},
                   {"r", q.r},         {"delta", finite_or_null(q.delta)},
                   {"R", q.R},         {"D", q.D},         {"distance", q.distance},
                   {"lambda", q.lambda}});
  return {{"points", pts},
          {"candidates_examined", seq.candidates_examined},
          {"precondition_growth", seq.precondition_growth}};
}

nlohmann::ordered_json to_json(const GrowthReport& g) {
  return {{"name", g.name},
          {"window", {g.lambda_min, g.lambda_max}},
          {"constant", g.constant},
          {"exponent", g.exponent},
          {"diagnostic", g.diagnostic},
          {"window_spread", g.window_spread},
          {"second_half_constant", g.second_half_constant}};
}

}  // namespace soliton
