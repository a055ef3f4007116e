#include "thinfilm_gl/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "thinfilm_gl/error.hpp"
#include "thinfilm_gl/gamma3d.hpp"

namespace tfgl {

namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

void check_inside(Vec2 p, const char* what) {
  if (!(norm(p) < 1.0)) {
    std::ostringstream os;
    os << what << " (" << p.x << ", " << p.y << ") is not inside the unit disk";
    fail(ErrorCode::kOutOfDomain, os.str());
  }
}

// Smooth image part (1/2pi) ln sqrt(1 - 2 x.y + |x|^2|y|^2).
double image_part(Vec2 x, Vec2 y) {
  return 0.5 * kInv2Pi * std::log(1.0 - 2.0 * dot(x, y) + norm2(x) * norm2(y));
}

}  // namespace

double green_disk(Vec2 x, Vec2 y) {
  check_inside(x, "x");
  check_inside(y, "y");
  const double r = norm(x - y);
  if (r == 0.0) fail(ErrorCode::kSingularEvaluation, "green_disk evaluated at x == y");
  return image_part(x, y) - kInv2Pi * std::log(r);
}

Curve::Curve(std::vector<Vec2> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed) {
  require(vertices_.size() >= 2, ErrorCode::kInvalidArgument,
          "a curve needs at least two vertices");
  for (const Vec2& v : vertices_)
    require(norm(v) <= 1.0 - 1e-6, ErrorCode::kOutOfDomain,
            "curve vertices must lie strictly inside the unit disk");
  const std::size_t cells = closed_ ? vertices_.size() : vertices_.size() - 1;
  for (std::size_t k = 0; k < cells; ++k) {
    const Vec2 a = cell_start(k), b = cell_end(k);
    const double l = norm(b - a);
    require(l > 0.0, ErrorCode::kInvalidArgument, "consecutive curve vertices coincide");
    mid_.push_back(0.5 * (a + b));
    len_.push_back(l);
  }
}

Curve Curve::circle(Vec2 center, double radius, int cells) {
  require(cells >= 3, ErrorCode::kInvalidArgument, "a circle needs at least 3 cells");
  require(radius > 0.0, ErrorCode::kInvalidArgument, "circle radius must be positive");
  std::vector<Vec2> v;
  for (int k = 0; k < cells; ++k) {
    const double t = 2.0 * std::numbers::pi * k / cells;
    v.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return Curve(std::move(v), true);
}

std::size_t Curve::cell_distance(std::size_t a, std::size_t b) const {
  const std::size_t d = a > b ? a - b : b - a;
  return closed_ ? std::min(d, num_cells() - d) : d;
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n) {
  require(n > 0, ErrorCode::kInvalidArgument, "measure needs at least one cell");
  return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

void DiscreteMeasure::validate(std::size_t cells) const {
  require(weights.size() == cells, ErrorCode::kInvalidArgument,
          "measure does not match the curve");
  double s = 0.0;
  for (double w : weights) {
    require(w >= 0.0, ErrorCode::kInvalidArgument, "measure weights must be nonnegative");
    s += w;
  }
  require(std::abs(s - 1.0) <= 1e-12, ErrorCode::kInvalidArgument,
          "measure weights must sum to 1");
}

std::vector<double> kernel_matrix(const Curve& curve) {
  const std::size_t n = curve.num_cells();
  const GaussRule fine = gauss_legendre(16), coarse = gauss_legendre(2);
  std::vector<double> k(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 mi = curve.midpoint(i);
    const double li = curve.length(i);
    k[i * n + i] = kInv2Pi * (std::log(1.0 - norm2(mi)) - std::log(li) + 1.5);
    for (std::size_t j = i + 1; j < n; ++j) {
      const GaussRule& r = curve.cell_distance(i, j) <= 3 ? fine : coarse;
      const Vec2 ai = curve.cell_start(i), bi = curve.cell_end(i);
      const Vec2 aj = curve.cell_start(j), bj = curve.cell_end(j);
      double s = 0.0;
      for (std::size_t p = 0; p < r.nodes.size(); ++p) {
        const Vec2 x = ai + (0.5 * (1.0 + r.nodes[p])) * (bi - ai);
        for (std::size_t q = 0; q < r.nodes.size(); ++q) {
          const Vec2 y = aj + (0.5 * (1.0 + r.nodes[q])) * (bj - aj);
          s += r.weights[p] * r.weights[q] * green_disk(x, y);
        }
      }
      k[i * n + j] = k[j * n + i] = 0.25 * s;
    }
  }
  return k;
}

double measure_energy(const DiscreteMeasure& mu, const std::vector<double>& kernel) {
  const std::size_t n = mu.weights.size();
  require(kernel.size() == n * n, ErrorCode::kInvalidArgument,
          "kernel does not match the measure");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += kernel[i * n + j] * mu.weights[j];
    s += mu.weights[i] * row;
  }
  return 0.5 * s;
}

double measure_energy(const DiscreteMeasure& mu, const Curve& curve) {
  mu.validate(curve.num_cells());
  return measure_energy(mu, kernel_matrix(curve));
}

std::vector<double> project_simplex(const std::vector<double>& x) {
  require(!x.empty(), ErrorCode::kInvalidArgument, "cannot project an empty vector");
  std::vector<double> s = x;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0.0) tau = t;
  }
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = std::max(0.0, x[k] - tau);
  return out;
}

namespace {

void matvec(const std::vector<double>& k, const std::vector<double>& x,
            std::vector<double>& y) {
  const std::size_t n = x.size();
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k[i * n + j] * x[j];
    y[i] = s;
  }
}

double largest_eigenvalue(const std::vector<double>& k, std::size_t n) {
  std::vector<double> x(n), y;
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  double lam = 0.0;
  for (int it = 0; it < 500; ++it) {
    matvec(k, x, y);
    double nrm = 0.0;
    for (double e : y) nrm += e * e;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    const double prev = lam;
    double xy = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      xy += x[i] * y[i];
      xx += x[i] * x[i];
    }
    lam = xy / xx;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    if (it > 10 && std::abs(lam - prev) <= 1e-12 * std::abs(lam)) break;
  }
  return lam;
}

}  // namespace

MeasureResult minimize_measure(const Curve& curve, const DiscreteMeasure& init,
                               const MeasureOptions& opts) {
  const std::size_t n = curve.num_cells();
  init.validate(n);
  const std::vector<double> k = kernel_matrix(curve);
  // A small safety margin on L keeps the step strictly inside the
  // monotone range despite the power-iteration estimate.
  const double lip = 1.01 * largest_eigenvalue(k, n);
  const double step = lip > 0.0 ? 1.0 / lip : 1.0;

  MeasureResult res;
  std::vector<double> w = init.weights, g, trial(n);
  double energy = measure_energy(init, k);
  while (true) {
    matvec(k, w, g);
    for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] - step * g[i];
    std::vector<double> next = project_simplex(trial);
    double kkt = 0.0;
    for (std::size_t i = 0; i < n; ++i) kkt = std::max(kkt, std::abs(next[i] - w[i]) / step);
    res.kkt_residual = kkt;
    if (kkt <= opts.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iters) break;
    ++res.iterations;
    const double e_next = measure_energy({next}, k);
    // Exact arithmetic never increases I with step <= 1/L. Near the optimum
    // the decrease drops below double resolution, so only a real increase
    // stops the iteration.
    if (e_next > energy + 1e-13 * std::abs(energy)) break;
    w.swap(next);
    energy = e_next;
  }
  res.measure.weights = std::move(w);
  res.energy = energy;
  return res;
}

VortexDensity vortex_count_scaling(double beta, const DiscreteMeasure& mu,
                                   const Curve& curve, double xi_max, double i_star) {
  require(beta >= 0.0, ErrorCode::kInvalidArgument, "beta must be nonnegative");
  require(i_star > 0.0, ErrorCode::kInvalidArgument, "I* must be positive");
  mu.validate(curve.num_cells());
  VortexDensity out;
  const double scale = beta * xi_max / (2.0 * i_star);
  for (std::size_t k = 0; k < curve.num_cells(); ++k) {
    const double c = scale * mu.weights[k];
    out.count.push_back(c);
    out.density.push_back(c / curve.length(k));
    out.total += c;
  }
  return out;
}

}  // namespace tfgl
