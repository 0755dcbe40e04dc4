#include "soliton/profile_io.hpp"

#include <fstream>
#include <stdexcept>

namespace soliton {

nlohmann::json profile_to_json(const SolitonProfile& profile) {
  nlohmann::json grid = nlohmann::json::array();
  for (const ProfileNode& n : profile.nodes()) {
    grid.push_back({{"r", n.r},
                    {"w", n.w},
                    {"wp", 1.0 - n.one_minus_wp},
                    {"f", n.f},
                    {"fp", n.fp},
                    {"one_minus_wp", n.one_minus_wp}});
  }
  return {{"normalization", {{"R_origin", profile.R_origin()}, {"f_origin", 0.0}}},
          {"tol", profile.tol()},
          {"max_drift", profile.max_drift()},
          {"grid", grid}};
}

SolitonProfile profile_from_json(const nlohmann::json& j) {
  try {
    double R_origin = j.at("normalization").at("R_origin").get<double>();
    double tol = j.at("tol").get<double>();
    std::vector<ProfileNode> nodes;
    for (const auto& g : j.at("grid")) {
      ProfileNode n;
      n.r = g.at("r").get<double>();
      n.w = g.at("w").get<double>();
      n.one_minus_wp =
          g.contains("one_minus_wp") ? g["one_minus_wp"].get<double>() : 1.0 - g.at("wp").get<double>();
      n.f = g.at("f").get<double>();
      n.fp = g.at("fp").get<double>();
      nodes.push_back(n);
    }
    return SolitonProfile(std::move(nodes), R_origin, tol);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("profile JSON: ") + e.what());
  }
}

void save_profile(const SolitonProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << profile_to_json(profile).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

SolitonProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return profile_from_json(j);
}

nlohmann::json to_json(const CurvatureSample<double>& k) {
  nlohmann::json j;
  j["r"] = k.r;
  j["K_rad"] = k.K_rad ? nlohmann::json(*k.K_rad) : nlohmann::json(nullptr);
  j["K_sph"] = k.K_sph;
  j["Ric_rad"] = k.Ric_rad;
  j["Ric_tan"] = k.Ric_tan;
  j["R"] = k.R;
  return j;
}

}  // namespace soliton
