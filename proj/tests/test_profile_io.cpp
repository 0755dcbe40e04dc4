#include "doctest.h"

#include "soliton/profile_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace soliton;

TEST_CASE("profile survives a JSON round trip bit for bit") {
  SolitonProfile p = integrate(seed(1e-4), 12.0, 1e-9);
  auto path = (std::filesystem::temp_directory_path() / "soliton_profile_rt.json").string();
  save_profile(p, path);
  SolitonProfile q = load_profile(path);
  std::remove(path.c_str());
  REQUIRE(q.nodes().size() == p.nodes().size());
  for (std::size_t i = 0; i < p.nodes().size(); ++i) {
    CHECK(q.nodes()[i].r == p.nodes()[i].r);
    CHECK(q.nodes()[i].w == p.nodes()[i].w);
    CHECK(q.nodes()[i].one_minus_wp == p.nodes()[i].one_minus_wp);
    CHECK(q.nodes()[i].fp == p.nodes()[i].fp);
  }
  CHECK(q.R_origin() == p.R_origin());
  CHECK(q.tol() == p.tol());
  CHECK(q.query(7.3).w == p.query(7.3).w);
}

TEST_CASE("one_minus_wp is optional on input") {
  SolitonProfile p = integrate(seed(1e-4), 10.0, 1e-9);
  nlohmann::json j = profile_to_json(p);
  for (auto& g : j["grid"]) g.erase("one_minus_wp");
  SolitonProfile q = profile_from_json(j);
  CHECK(q.query(5.0).w == doctest::Approx(p.query(5.0).w).epsilon(1e-12));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(profile_from_json(nlohmann::json{{"tol", 1e-9}}), std::invalid_argument);
  CHECK_THROWS_AS(load_profile("/nonexistent/profile.json"), std::runtime_error);
  auto path = (std::filesystem::temp_directory_path() / "soliton_profile_bad.json").string();
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_profile(path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("curvature records carry null K_rad in dimension 2") {
  auto j = to_json(curvature_at(cigar_fiber(1.0), 0.5));
  CHECK(j["K_rad"].is_null());
  CHECK(j["R"].get<double>() > 0.0);
}
