#pragma once

#include "soliton/bryant.hpp"
#include "soliton/warped_geometry.hpp"

#include "json.hpp"

#include <string>

namespace soliton {

/// {"normalization": {"R_origin": ...}, "tol": ..., "grid": [{"r", "w", "wp", "f", "fp",
/// "one_minus_wp"}, ...]}. one_minus_wp is optional on input; without it 1 - wp is used.
nlohmann::json profile_to_json(const SolitonProfile& profile);
SolitonProfile profile_from_json(const nlohmann::json& j);

void save_profile(const SolitonProfile& profile, const std::string& path);
SolitonProfile load_profile(const std::string& path);

/// Flat record {r, K_rad, K_sph, Ric_rad, Ric_tan, R}; K_rad is null in dimension 2.
nlohmann::json to_json(const CurvatureSample<double>& k);

}  // namespace soliton
