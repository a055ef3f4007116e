#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thinfilm_gl/error.hpp"
#include "thinfilm_gl/field_spec.hpp"
#include "thinfilm_gl/geometry.hpp"

using namespace tfgl;

TEST_CASE("disk grid 5x5 has the nine nodes strictly inside") {
  const Grid2D g = build_disk_domain(1.0, 5);
  CHECK(g.hx() == doctest::Approx(0.5));
  int count = 0;
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) {
      const double x = -1.0 + 0.5 * i, y = -1.0 + 0.5 * j;
      const bool inside = x * x + y * y < 1.0;
      CHECK(g.interior(i, j) == inside);
      count += inside;
    }
  CHECK(count == 9);
  CHECK(g.num_interior() == 9);
}

TEST_CASE("disk grid 3x3 keeps only the centre") {
  const Grid2D g = build_disk_domain(1.0, 3);
  REQUIRE(g.num_interior() == 1);
  CHECK(g.interior_nodes()[0] == g.node_id(1, 1));
}

TEST_CASE("interior count approximates the disk area") {
  const Grid2D g = build_disk_domain(2.0, 129);
  const double cells = std::numbers::pi * 4.0 / (g.hx() * g.hx());
  CHECK(std::abs(g.num_interior() - cells) / cells < 0.01);
}

TEST_CASE("area estimate converges at least linearly") {
  double prev = 0.0;
  for (int n : {33, 65, 129, 257}) {
    const Grid2D g = build_disk_domain(1.0, n);
    const double err = std::abs(g.num_interior() * g.cell_area() - std::numbers::pi);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 0.5);
    prev = err;
  }
}

TEST_CASE("grid construction rejects bad sizes") {
  CHECK_THROWS_AS(build_disk_domain(1.0, 2), Error);
  CHECK_THROWS_AS(build_disk_domain(-1.0, 5), Error);
  try {
    build_disk_domain(1.0, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("boundary fraction lands on the circle") {
  const DiskDomain disk;
  const Vec2 a{0.9, 0.0}, b{1.1, 0.0};
  CHECK(disk.boundary_fraction(a, b) == doctest::Approx(0.5).epsilon(1e-14));
  const Vec2 c{0.3, 0.9}, e{0.3, 1.1};
  const double t = disk.boundary_fraction(c, e);
  const Vec2 p = c + t * (e - c);
  CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tilted paraboloid profile has unit thickness") {
  const Grid2D g = build_disk_domain(1.0, 33);
  const FieldSpec f = FieldSpec::parse("paraboloid");
  const FieldSpec gs = FieldSpec::parse("f + 1", &f);
  const ThicknessProfile t = build_thickness(g, f, gs);
  for (std::size_t id : g.interior_nodes()) {
    const Vec2 p = g.position(id);
    CHECK(t.d[id] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.m[id] == doctest::Approx(0.5 * norm2(p) + 0.5).epsilon(1e-15));
    // stored derived fields match a recomputation bitwise
    CHECK(t.d[id] == t.g[id] - t.f[id]);
    CHECK(t.m[id] == 0.5 * (t.f[id] + t.g[id]));
    CHECK((*t.grad_m)[id].x == doctest::Approx(p.x));
  }
}

TEST_CASE("flat film") {
  const Grid2D g = build_disk_domain(1.0, 9);
  const ThicknessProfile t =
      build_thickness(g, FieldSpec::parse("0"), FieldSpec::parse("1"));
  for (std::size_t id : g.interior_nodes()) {
    CHECK(t.d[id] == 1.0);
    CHECK(t.m[id] == 0.5);
  }
}

TEST_CASE("circle-concentration profile stays finite on the singular line") {
  const Grid2D g = build_disk_domain(1.0, 65);
  const FieldSpec f = FieldSpec::parse("circle-concentration");
  const FieldSpec gs = FieldSpec::parse("f+1", &f);
  const ThicknessProfile t = build_thickness(g, f, gs);
  for (std::size_t id : g.interior_nodes()) {
    CHECK(std::isfinite(t.f[id]));
    CHECK(t.d[id] == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Vec2 on_axis{0.0, 0.4};
  CHECK(f.value(on_axis) == doctest::Approx(0.5 * 0.4 * 0.4));
  // limit from the side agrees with the convention
  CHECK(f.value({1e-9, 0.4}) == doctest::Approx(0.08).epsilon(1e-9));
}

TEST_CASE("circle-concentration gradient matches finite differences") {
  const FieldSpec f = FieldSpec::parse("circle-concentration");
  for (Vec2 p : {Vec2{0.3, 0.2}, Vec2{-0.4, -0.5}, Vec2{0.05, -0.6}}) {
    const double s = 1e-6;
    const double gx = (f.value({p.x + s, p.y}) - f.value({p.x - s, p.y})) / (2 * s);
    const double gy = (f.value({p.x, p.y + s}) - f.value({p.x, p.y - s})) / (2 * s);
    const Vec2 g = f.sample(p).grad;
    CHECK(g.x == doctest::Approx(gx).epsilon(1e-7));
    CHECK(g.y == doctest::Approx(gy).epsilon(1e-7));
  }
}

TEST_CASE("non-positive thickness names the node") {
  const Grid2D g = build_disk_domain(1.0, 9);
  try {
    build_thickness(g, FieldSpec::parse("x1"), FieldSpec::parse("0"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidThickness);
    CHECK(std::string(e.what()).find("node (") != std::string::npos);
  }
}

TEST_CASE("field spec grammar") {
  CHECK(FieldSpec::parse("2*x1 - x2^2 + pi").value({1.0, 2.0}) ==
        doctest::Approx(2.0 - 4.0 + std::numbers::pi));
  CHECK(FieldSpec::parse("sqrt(abs(-4)) + ln(1)").value({}) == doctest::Approx(2.0));
  CHECK(FieldSpec::parse("-r").value({3.0, 4.0}) == doctest::Approx(-5.0));
  CHECK(FieldSpec::parse("x1-x2").value({3.0, 1.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(FieldSpec::parse("x3"), Error);
  CHECK_THROWS_AS(FieldSpec::parse("f + 1"), Error);
  CHECK_THROWS_AS(FieldSpec::parse("(x1"), Error);
  CHECK_THROWS_AS(FieldSpec::parse("1 2"), Error);
}
