#include "doctest.h"

#include "soliton/point_picking.hpp"

#include <cmath>

using namespace soliton;

namespace {

const PickSequence& sequence() {
  static const PickSequence seq = [] {
    auto out = pick_points(make_model(CigarLine::from_rhat(0.5)), default_pick_schedule(), 4);
    REQUIRE(std::holds_alternative<PickSequence>(out));
    return std::get<PickSequence>(out);
  }();
  return seq;
}

}  // namespace

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(validate_schedule(default_pick_schedule(), 50));
  PickSchedule growing_eps{[](int j) { return 0.1 * j; }, [](int j) { return 1.0 * j * j; }};
  CHECK_THROWS_AS(validate_schedule(growing_eps, 5), std::invalid_argument);
  PickSchedule flat_A{[](int j) { return 1.0 / j; }, [](int) { return 4.0; }};
  CHECK_THROWS_AS(validate_schedule(flat_A, 5), std::invalid_argument);
  // A eps^2 = j^2 / j^2 = 1 is constant.
  PickSchedule flat_product{[](int j) { return 1.0 / j; }, [](int j) { return 1.0 * j * j; }};
  CHECK_THROWS_AS(validate_schedule(flat_product, 5), std::invalid_argument);
}

TEST_CASE("picked points satisfy the conditions, recomputed here") {
  CigarLine m = CigarLine::from_rhat(0.5);
  const PickSequence& seq = sequence();
  REQUIRE(seq.points.size() == 4);
  for (std::size_t i = 0; i < seq.points.size(); ++i) {
    const PickedPoint& p = seq.points[i];
    // On the axis R equals rhat and is the maximum of R, so (a) holds for any ball.
    CHECK(p.R == doctest::Approx(0.5));
    CHECK(p.s == doctest::Approx(p.level / m.slope));
    CHECK(p.r == doctest::Approx(p.eps * p.sigma_j));
    CHECK(p.D == doctest::Approx(cap_mesh_diameter(m, p.level)).epsilon(1e-9));
    CHECK(p.RD2() <= p.A * (1 + 1e-6));
    if (3 * p.eps >= 1) CHECK(std::isinf(p.delta));
    else CHECK(p.delta == doctest::Approx(std::pow(1 - 3 * p.eps, -2) - 1));
    if (i == 0) continue;
    const PickedPoint& q = seq.points[i - 1];
    CHECK(p.r2R() > q.r2R());
    CHECK(p.lambda > q.lambda);
    CHECK(p.RD2() > q.RD2());
    for (std::size_t k = 0; k < i; ++k) {
      const PickedPoint& o = seq.points[k];
      CHECK(std::abs(p.s - o.s) >= p.r + o.r);
    }
  }
}

TEST_CASE("audit agrees") {
  PickAudit audit = audit_pick(CigarLine::from_rhat(0.5), sequence());
  CHECK(audit.ok());
  CHECK(audit.failures.empty());
  CHECK(audit.worst_mesh_change < 1e-2);
}

TEST_CASE("models with bounded R D^2 are refused") {
  auto cyl = pick_points(make_model(RoundCylinder{1.0}), default_pick_schedule(), 3);
  CHECK(std::holds_alternative<PickRefusal>(cyl));
  auto cigar = pick_points(make_model(Cigar{1.0}), default_pick_schedule(), 3);
  CHECK(std::holds_alternative<PickRefusal>(cigar));
  auto bryant = pick_points(make_model(BryantNumeric{integrate(seed(1e-4), 120.0, 1e-10)}),
                            default_pick_schedule(), 3);
  REQUIRE(std::holds_alternative<PickRefusal>(bryant));
  const PickRefusal& r = std::get<PickRefusal>(bryant);
  CHECK(r.second_half_max <= 1.1 * r.first_half_max);
  CHECK(r.RD2_bound > 0.0);
}
