#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thinfilm_gl/equilibrium.hpp"
#include "thinfilm_gl/error.hpp"

using namespace tfgl;

namespace {

const double kPi = std::numbers::pi;

DiscreteMeasure random_measure(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  DiscreteMeasure m;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += m.weights.emplace_back(u(rng));
  for (double& w : m.weights) w /= s;
  return m;
}

int code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return 0;
}

}  // namespace

TEST_CASE("disk Green's function") {
  CHECK(green_disk({0.5, 0.0}, {-0.5, 0.0}) == doctest::Approx(std::log(1.25) / (2 * kPi)).epsilon(1e-14));
  CHECK(green_disk({0.5, 0.0}, {-0.5, 0.0}) == doctest::Approx(0.035514).epsilon(1e-4));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int k = 0; k < 50; ++k) {
    const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const double gxy = green_disk(x, y);
    CHECK(gxy > 0.0);
    CHECK(std::abs(gxy - green_disk(y, x)) <= 1e-12 * std::abs(gxy));
  }
  const double r = 1.0 - 1e-4;
  for (double t : {0.0, 1.0, 2.5}) CHECK(std::abs(green_disk({r * std::cos(t), r * std::sin(t)}, {0.01, 0.0})) < 1e-3);

  CHECK(code_of([] { green_disk({0.2, 0.1}, {0.2, 0.1}); }) == static_cast<int>(ErrorCode::kSingularEvaluation));
  CHECK(code_of([] { green_disk({1.0, 0.0}, {0.2, 0.1}); }) == static_cast<int>(ErrorCode::kOutOfDomain));
  CHECK(code_of([] { green_disk({0.2, 0.1}, {0.0, -1.5}); }) == static_cast<int>(ErrorCode::kOutOfDomain));
}

TEST_CASE("curve invariants") {
  CHECK(code_of([] { Curve({{0.0, 0.0}, {1.0, 0.0}}, false); }) == static_cast<int>(ErrorCode::kOutOfDomain));
  CHECK(code_of([] { Curve({{0.0, 0.0}, {0.0, 0.0}, {0.1, 0.0}}, false); }) == static_cast<int>(ErrorCode::kInvalidArgument));
  const Curve c = Curve::circle({0.0, 0.0}, 0.5, 8);
  CHECK(c.num_cells() == 8);
  CHECK(c.cell_distance(0, 7) == 1);
  CHECK(Curve({{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}}, false).num_cells() == 2);
}

TEST_CASE("uniform measure on the circle of radius 1/sqrt3") {
  const Curve c = Curve::circle({0.0, 0.0}, 1.0 / std::sqrt(3.0), 256);
  const double expect = std::log(3.0) / (8.0 * kPi);
  CHECK(std::abs(measure_energy(DiscreteMeasure::uniform(256), c) - expect) < 1e-3 * expect);
}

TEST_CASE("uniform circle energy matches -ln a / (4 pi) under refinement") {
  // Brute-force oracle independent of the closed form: 10^4 cells.
  const double a = 0.4;
  const double fine = measure_energy(DiscreteMeasure::uniform(10000), Curve::circle({0.0, 0.0}, a, 10000));
  CHECK(std::abs(fine + std::log(a) / (4.0 * kPi)) < 1e-6);
}

TEST_CASE("point mass energy diverges logarithmically") {
  // One straight cell: I = (1/4 pi)(ln(1 - |m|^2) - ln l + 3/2).
  auto point_mass = [](double l) {
    const Curve c({{0.1 - 0.5 * l, 0.2}, {0.1 + 0.5 * l, 0.2}}, false);
    return measure_energy(DiscreteMeasure::uniform(1), c);
  };
  const double l = 1e-3;
  CHECK(point_mass(l) == doctest::Approx((std::log(1.0 - 0.05) - std::log(l) + 1.5) / (4.0 * kPi)).epsilon(1e-12));
  CHECK(point_mass(l / 2) - point_mass(l) == doctest::Approx(std::log(2.0) / (4.0 * kPi)).epsilon(1e-10));
}

TEST_CASE("energy is rotation invariant on a centred circle") {
  const Curve c = Curve::circle({0.0, 0.0}, 0.6, 64);
  const DiscreteMeasure m = random_measure(64, 4);
  const double e0 = measure_energy(m, c);
  for (std::size_t shift : {1u, 17u, 40u}) {
    DiscreteMeasure r;
    for (std::size_t k = 0; k < 64; ++k) r.weights.push_back(m.weights[(k + shift) % 64]);
    CHECK(std::abs(measure_energy(r, c) - e0) <= 1e-12 * e0);
  }
}

TEST_CASE("energy is nonnegative") {
  const Curve c({{-0.8, 0.1}, {-0.3, 0.5}, {0.2, 0.3}, {0.6, -0.4}, {0.1, -0.7}}, false);
  for (std::uint64_t s = 0; s < 20; ++s) CHECK(measure_energy(random_measure(4, s), c) >= 0.0);
}

TEST_CASE("simplex projection") {
  const auto p = project_simplex({0.5, 2.0, -1.0, 0.3});
  double s = 0.0;
  for (double w : p) {
    CHECK(w >= 0.0);
    s += w;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(1.0));
  const std::vector<double> inside{0.2, 0.3, 0.5};
  CHECK(project_simplex(inside) == inside);
}

TEST_CASE("equilibrium measure on a centred circle is uniform") {
  const Curve c = Curve::circle({0.0, 0.0}, 1.0 / std::sqrt(3.0), 256);
  const MeasureResult a = minimize_measure(c, random_measure(256, 1));
  const MeasureResult b = minimize_measure(c, random_measure(256, 2));
  CHECK(a.converged);
  CHECK(b.converged);
  double dev = 0.0, tv = 0.0;
  for (std::size_t k = 0; k < 256; ++k) {
    dev = std::max(dev, std::abs(a.measure.weights[k] - 1.0 / 256.0));
    tv += 0.5 * std::abs(a.measure.weights[k] - b.measure.weights[k]);
  }
  CHECK(dev <= 1e-3 / 256.0);
  CHECK(tv <= 1e-3);
  CHECK(a.energy <= measure_energy(random_measure(256, 1), c));
}

TEST_CASE("single cell carries the whole mass") {
  const Curve c({{0.1, 0.1}, {0.2, 0.1}}, false);
  const MeasureResult r = minimize_measure(c, DiscreteMeasure::uniform(1));
  CHECK(r.converged);
  CHECK(r.measure.weights == std::vector<double>{1.0});
}

TEST_CASE("off-centre circle against a brute-force density search") {
  const std::size_t n = 96;
  const Curve c = Curve::circle({0.3, 0.0}, 0.3, static_cast<int>(n));
  const std::vector<double> k = kernel_matrix(c);
  const MeasureResult r = minimize_measure(c, DiscreteMeasure::uniform(n));
  CHECK(r.converged);

  double best = 1e300, best_a = 0.0;
  for (int ia = -9; ia <= 9; ++ia)
    for (int ib = -9; ib <= 9; ++ib)
      for (int ic = -9; ic <= 9; ++ic) {
        const double a = 0.1 * ia, b = 0.1 * ib, cc = 0.1 * ic;
        DiscreteMeasure m;
        double s = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
          const double t = 2.0 * kPi * (q + 0.5) / n;
          s += m.weights.emplace_back(std::max(0.0, 1.0 + a * std::cos(t) + b * std::sin(t) + cc * std::cos(2 * t)));
        }
        for (double& w : m.weights) w /= s;
        const double e = measure_energy(m, k);
        if (e < best) {
          best = e;
          best_a = a;
        }
      }
  CHECK(r.energy <= best + 1e-12);
  double first = 0.0, lo = 1.0, hi = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double w = r.measure.weights[q];
    first += w * std::cos(2.0 * kPi * (q + 0.5) / n);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  CHECK(hi > 1.05 * lo);
  CHECK(best_a != 0.0);
  CHECK((first > 0.0) == (best_a > 0.0));
}

TEST_CASE("predicted vortex counts") {
  const Curve c = Curve::circle({0.0, 0.0}, 1.0 / std::sqrt(3.0), 128);
  const DiscreteMeasure mu = DiscreteMeasure::uniform(128);
  const double xi = 1.0 / (12.0 * std::sqrt(3.0)), istar = std::log(3.0) / (8.0 * kPi);

  const VortexDensity zero = vortex_count_scaling(0.0, mu, c, xi, istar);
  CHECK(zero.total == 0.0);
  for (double d : zero.density) CHECK(d == 0.0);

  const double beta = 7.0;
  const VortexDensity v = vortex_count_scaling(beta, mu, c, xi, istar);
  CHECK(v.total == doctest::Approx(beta * kPi / (3.0 * std::sqrt(3.0) * std::log(3.0))).epsilon(1e-12));
  CHECK(v.total / beta == doctest::Approx(0.5505).epsilon(1e-3));
  for (double d : v.density) CHECK(d == doctest::Approx(v.density[0]).epsilon(1e-12));

  CHECK(code_of([&] { vortex_count_scaling(1.0, mu, c, xi, 0.0); }) == static_cast<int>(ErrorCode::kInvalidArgument));
}
