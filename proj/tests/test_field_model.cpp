#include <cmath>

#include "doctest.h"
#include "thinfilm_gl/error.hpp"
#include "thinfilm_gl/field_model.hpp"

using namespace tfgl;

TEST_CASE("regime classification") {
  CHECK(classify_regime(RegimeSpec::constant(2.0)) == Regime::kSubcriticalFinite);
  CHECK(classify_regime(RegimeSpec::constant(0.0)) == Regime::kSubcriticalFinite);
  CHECK(classify_regime(RegimeSpec::divergent(1.0, 0.5)) == Regime::kSubcriticalInfinite);
  CHECK(classify_regime(RegimeSpec::critical(1.0)) == Regime::kCritical);
  CHECK(classify_regime(RegimeSpec::supercritical(1.0, 2.0)) == Regime::kSupercritical);
  CHECK(RegimeSpec::critical(1.0).rho(0.1) == doctest::Approx(10.0));
  CHECK_THROWS_AS(RegimeSpec::divergent(1.0, 1.0), Error);
  CHECK_THROWS_AS(RegimeSpec::supercritical(1.0, 1.0), Error);
  CHECK_THROWS_AS(RegimeSpec::critical(0.0), Error);
  CHECK_THROWS_AS(RegimeSpec::constant(-1.0), Error);
}

TEST_CASE("gamma_kappa values") {
  CHECK(gamma_kappa(1.0, 0.0, 3.0) == 1.0);
  CHECK(gamma_kappa(1.0, 12.0 * 4.0, 2.0) == 0.0);
  CHECK(gamma_kappa(1.0, 12.0, 2.0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(gamma_kappa(2.0, 1e3, 1.0) == 0.0);
  // nonincreasing in both d and the parallel field
  double prev = 2.0;
  for (double h2 = 0.0; h2 < 20.0; h2 += 0.5) {
    const double g = gamma_kappa(1.3, h2, 1.5);
    CHECK(g <= prev);
    prev = g;
  }
}

TEST_CASE("normal-state threshold") {
  CHECK(normal_state_threshold(1.0, 1.0) == doctest::Approx(std::sqrt(12.0)));
  CHECK(normal_state_threshold(2.0, 1.0) == doctest::Approx(2.0 * std::sqrt(12.0)));
  CHECK(normal_state_threshold(1.0, 2.0) == doctest::Approx(std::sqrt(12.0) / 2.0));
  const double t = normal_state_threshold(1.7, 1.3);
  CHECK(gamma_kappa(1.3, t * t, 1.7) == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("applied field validation") {
  CHECK_THROWS_AS(AppliedField::make(1.0, {1.0, 1.0, 0.0}, 1.0), Error);
  CHECK_THROWS_AS(AppliedField::make(-1.0, {0.0, 0.0, 1.0}, 1.0), Error);
  const AppliedField f = AppliedField::make(2.0, {0.6, 0.0, 0.8}, 1.0);
  CHECK(f.h_par_sq() == doctest::Approx(1.44));
}

namespace {

struct Setup {
  Grid2D grid = build_disk_domain(1.0, 65);
  ThicknessProfile thick;
  Setup(const char* f, const char* g) {
    const FieldSpec fs = FieldSpec::parse(f);
    thick = build_thickness(grid, fs, FieldSpec::parse(g, &fs));
  }
};

}  // namespace

TEST_CASE("critical potential on the tilted paraboloid") {
  Setup s("paraboloid", "f + 1");
  const EffectivePotential pot =
      build_effective_potential(s.grid, &s.thick, {1.0, 0.0, 0.0}, PotentialKind::kCriticalOblique);
  const double h = s.grid.hx();
  for (std::size_t id : s.grid.interior_nodes()) {
    const Vec2 p = s.grid.position(id);
    CHECK(pot.a0[id].x == 0.0);
    CHECK(pot.a0[id].y == doctest::Approx(-(0.5 * norm2(p) + 0.5)));
    // curl of (0, -m) is -dm/dx1 = -x1; centred differences are exact for
    // the quadratic, one-sided ones are O(h).
    const double tol = s.grid.in_boundary_band(id) ? h : 1e-12;
    CHECK(std::abs(pot.h0[id] + p.x) <= tol);
  }
  const auto an = analytic_effective_field(s.grid, s.thick, pot);
  REQUIRE(an);
  for (std::size_t id : s.grid.interior_nodes())
    CHECK((*an)[id] == doctest::Approx(-s.grid.position(id).x));
}

TEST_CASE("perpendicular field gives unit curl") {
  Setup s("paraboloid", "f + 1");
  for (auto kind : {PotentialKind::kCriticalOblique, PotentialKind::kSubcriticalPerp}) {
    const EffectivePotential pot = build_effective_potential(s.grid, &s.thick, {0, 0, 1}, kind);
    for (std::size_t id : s.grid.interior_nodes()) {
      const Vec2 p = s.grid.position(id);
      CHECK(pot.a0[id].x == doctest::Approx(-0.5 * p.y));
      CHECK(pot.a0[id].y == doctest::Approx(0.5 * p.x));
      CHECK(pot.h0[id] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("flat film in-plane field has a constant potential") {
  Setup s("0", "1");
  const EffectivePotential pot =
      build_effective_potential(s.grid, &s.thick, {1, 0, 0}, PotentialKind::kCriticalOblique);
  for (std::size_t id : s.grid.interior_nodes()) {
    CHECK(pot.a0[id].y == doctest::Approx(-0.5));
    CHECK(std::abs(pot.h0[id]) < 1e-14);
  }
}

TEST_CASE("potential is linear in the direction") {
  Setup s("paraboloid", "f + 1");
  const double c = std::sqrt(0.5);
  auto build = [&](Vec3 a) {
    return build_effective_potential(s.grid, &s.thick, a, PotentialKind::kCriticalOblique);
  };
  const auto mix = build({c, 0.0, c});
  const auto p1 = build({1, 0, 0});
  const auto p3 = build({0, 0, 1});
  for (std::size_t id : s.grid.interior_nodes()) {
    CHECK(mix.a0[id].x == doctest::Approx(c * (p1.a0[id].x + p3.a0[id].x)));
    CHECK(mix.a0[id].y == doctest::Approx(c * (p1.a0[id].y + p3.a0[id].y)));
    CHECK(mix.ay_edge[id] == doctest::Approx(c * (p1.ay_edge[id] + p3.ay_edge[id])));
  }
}

TEST_CASE("non-unit direction is rejected") {
  Setup s("0", "1");
  try {
    build_effective_potential(s.grid, &s.thick, {1, 1, 0}, PotentialKind::kCriticalOblique);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
  CHECK_THROWS_AS(
      build_effective_potential(s.grid, nullptr, {1, 0, 0}, PotentialKind::kCriticalOblique),
      Error);
}
