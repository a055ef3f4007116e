#include "thinfilm_gl/gl2d.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sparse.hpp"
#include "thinfilm_gl/error.hpp"

namespace tfgl {

std::vector<Edge> interior_edges(const Grid2D& grid) {
  std::vector<Edge> edges;
  for (std::size_t id : grid.interior_nodes()) {
    const int i = grid.node_i(id), j = grid.node_j(id);
    if (grid.interior(i + 1, j)) edges.push_back({id, grid.node_id(i + 1, j), true});
    if (grid.interior(i, j + 1)) edges.push_back({id, grid.node_id(i, j + 1), false});
  }
  return edges;
}

std::vector<double> link_angles(const Grid2D& grid, const EffectivePotential& pot,
                                double lambda) {
  require(pot.ax_edge.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "effective potential does not match the grid");
  std::vector<double> theta;
  for (const Edge& e : interior_edges(grid))
    theta.push_back(e.horizontal ? lambda * pot.ax_edge[e.tail] * grid.hx()
                                 : lambda * pot.ay_edge[e.tail] * grid.hy());
  return theta;
}

OrderParameterField make_field(const Grid2D& grid, const EffectivePotential& pot,
                               double lambda, std::vector<cplx> v) {
  require(v.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "order parameter does not match the grid");
  for (std::size_t id = 0; id < v.size(); ++id)
    if (!grid.interior(id)) v[id] = 0.0;
  return {std::move(v), link_angles(grid, pot, lambda)};
}

GLModel::GLModel(const Grid2D& grid, const ThicknessProfile& thick, double kappa,
                 GammaMode mode, double h_par_sq)
    : grid_(&grid), thick_(&thick), kappa_(kappa), edges_(interior_edges(grid)) {
  require(kappa > 0.0, ErrorCode::kInvalidArgument, "kappa must be positive");
  require(h_par_sq >= 0.0, ErrorCode::kInvalidArgument, "|h'|^2 must be >= 0");
  require(thick.d.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "thickness profile does not match the grid");
  edge_weight_.reserve(edges_.size());
  for (const Edge& e : edges_) {
    const double ratio = e.horizontal ? grid.hy() / grid.hx() : grid.hx() / grid.hy();
    edge_weight_.push_back(0.5 * (thick.d[e.tail] + thick.d[e.head]) * ratio);
  }
  gamma_.assign(grid.num_nodes(), 0.0);
  for (std::size_t id : grid.interior_nodes())
    gamma_[id] = mode == GammaMode::kOne ? 1.0 : gamma_kappa(thick.d[id], h_par_sq, kappa);
}

void GLModel::check(const OrderParameterField& field) const {
  require(field.v.size() == grid_->num_nodes() && field.theta.size() == edges_.size(),
          ErrorCode::kInvalidArgument, "order parameter field does not match the grid");
}

namespace {

std::vector<cplx> links(const std::vector<double>& theta) {
  std::vector<cplx> u(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) u[k] = std::polar(1.0, theta[k]);
  return u;
}

}  // namespace

// The work routines take precomputed links so that the minimiser does not
// re-evaluate cos/sin on every call.
struct GLKernels {
  static EnergyBreakdown energy(const GLModel& m, const std::vector<cplx>& v,
                                const std::vector<cplx>& u, const std::vector<cplx>* b) {
    const ThicknessProfile& t = *m.thick_;
    const std::vector<double>& w = m.edge_weight_;
    EnergyBreakdown e;
    const auto& edges = m.edges();
    for (std::size_t k = 0; k < edges.size(); ++k)
      e.kinetic += 0.5 * w[k] * std::norm(v[edges[k].head] - u[k] * v[edges[k].tail]);
    const double area = m.grid().cell_area();
    const double c = 0.25 * m.kappa() * m.kappa();
    for (std::size_t id : m.grid().interior_nodes()) {
      const double q = std::norm(v[id]) - m.gamma(id) * m.gamma(id);
      e.potential += t.d[id] * c * q * q * area;
      if (b) e.vertical_b += 0.5 * t.d[id] * std::norm((*b)[id]) * area;
    }
    e.total = e.kinetic + e.vertical_b + e.potential;
    return e;
  }

  static void gradient(const GLModel& m, const std::vector<cplx>& v,
                       const std::vector<cplx>& u, std::vector<cplx>& g) {
    const ThicknessProfile& t = *m.thick_;
    const std::vector<double>& w = m.edge_weight_;
    g.assign(v.size(), 0.0);
    const auto& edges = m.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = edges[k];
      const cplx r = w[k] * (v[e.head] - u[k] * v[e.tail]);
      g[e.head] += r;
      g[e.tail] -= std::conj(u[k]) * r;
    }
    const double area = m.grid().cell_area();
    const double c = m.kappa() * m.kappa();
    for (std::size_t id : m.grid().interior_nodes()) {
      const double q = std::norm(v[id]) - m.gamma(id) * m.gamma(id);
      g[id] = g[id] / area + t.d[id] * c * q * v[id];
    }
  }

  static std::array<double, 5> line(const GLModel& m, const std::vector<cplx>& v,
                                    const std::vector<cplx>& p, const std::vector<cplx>& u) {
    const ThicknessProfile& t = *m.thick_;
    const std::vector<double>& w = m.edge_weight_;
    std::array<double, 5> c{0, 0, 0, 0, 0};
    const auto& edges = m.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = edges[k];
      const cplx r = v[e.head] - u[k] * v[e.tail];
      const cplx s = p[e.head] - u[k] * p[e.tail];
      c[0] += 0.5 * w[k] * std::norm(r);
      c[1] += w[k] * std::real(std::conj(r) * s);
      c[2] += 0.5 * w[k] * std::norm(s);
    }
    const double area = m.grid().cell_area();
    const double kk = 0.25 * m.kappa() * m.kappa();
    for (std::size_t id : m.grid().interior_nodes()) {
      const double a0 = std::norm(v[id]) - m.gamma(id) * m.gamma(id);
      const double a1 = 2.0 * std::real(std::conj(v[id]) * p[id]);
      const double a2 = std::norm(p[id]);
      const double s = t.d[id] * kk * area;
      c[0] += s * a0 * a0;
      c[1] += s * 2.0 * a0 * a1;
      c[2] += s * (a1 * a1 + 2.0 * a0 * a2);
      c[3] += s * 2.0 * a1 * a2;
      c[4] += s * a2 * a2;
    }
    return c;
  }
};

EnergyBreakdown GLModel::energy(const OrderParameterField& field,
                                const std::vector<cplx>* b) const {
  check(field);
  if (b)
    require(b->size() == grid_->num_nodes(), ErrorCode::kInvalidArgument,
            "b field does not match the grid");
  return GLKernels::energy(*this, field.v, links(field.theta), b);
}

std::vector<cplx> GLModel::gradient(const OrderParameterField& field) const {
  check(field);
  std::vector<cplx> g;
  GLKernels::gradient(*this, field.v, links(field.theta), g);
  return g;
}

std::array<double, 5> GLModel::line_polynomial(const OrderParameterField& field,
                                               const std::vector<cplx>& p) const {
  check(field);
  return GLKernels::line(*this, field.v, p, links(field.theta));
}

EnergyBreakdown discrete_energy(const Grid2D& grid, const OrderParameterField& field,
                                const ThicknessProfile& thick, double kappa,
                                GammaMode mode, double h_par_sq,
                                const std::vector<cplx>* b) {
  return GLModel(grid, thick, kappa, mode, h_par_sq).energy(field, b);
}

std::vector<cplx> energy_gradient(const Grid2D& grid, const OrderParameterField& field,
                                  const ThicknessProfile& thick, double kappa,
                                  GammaMode mode, double h_par_sq) {
  return GLModel(grid, thick, kappa, mode, h_par_sq).gradient(field);
}

OrderParameterField gauge_transform(const Grid2D& grid, const OrderParameterField& field,
                                    const std::vector<double>& eta) {
  require(eta.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "gauge function does not match the grid");
  const std::vector<Edge> edges = interior_edges(grid);
  require(field.v.size() == grid.num_nodes() && field.theta.size() == edges.size(),
          ErrorCode::kInvalidArgument, "order parameter field does not match the grid");
  OrderParameterField out = field;
  for (std::size_t id : grid.interior_nodes()) out.v[id] *= std::polar(1.0, eta[id]);
  for (std::size_t k = 0; k < edges.size(); ++k)
    out.theta[k] += eta[edges[k].head] - eta[edges[k].tail];
  return out;
}

std::vector<double> coulomb_gauge(const GLModel& model, const std::vector<double>& theta) {
  const Grid2D& grid = model.grid();
  const auto& edges = model.edges();
  require(theta.size() == edges.size(), ErrorCode::kInvalidArgument,
          "link angles do not match the grid");
  const std::size_t n = grid.num_interior();
  // Weighted graph Laplacian (Neumann); its constant null space is removed
  // by pinning the mean afterwards, and CG handles the consistent system.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  std::vector<double> rhs(n, 0.0), diag(n, 0.0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto t = static_cast<std::size_t>(grid.interior_index(edges[k].tail));
    const auto h = static_cast<std::size_t>(grid.interior_index(edges[k].head));
    const double w = model.edge_weights()[k];
    diag[t] += w;
    diag[h] += w;
    rows[t].push_back({h, -w});
    rows[h].push_back({t, -w});
    rhs[h] -= w * theta[k];
    rhs[t] += w * theta[k];
  }
  detail::CsrMatrix mat;
  for (std::size_t r = 0; r < n; ++r) {
    rows[r].push_back({r, diag[r]});
    std::sort(rows[r].begin(), rows[r].end());
    for (const auto& [c, v] : rows[r]) mat.push(c, v);
    mat.end_row();
  }
  std::vector<double> x(n, 0.0);
  const double scale = std::max(1.0, detail::max_abs(rhs));
  detail::conjugate_gradient(mat, rhs, x, 1e-12 * scale, 20 * static_cast<int>(n) + 1000);
  double mean = 0.0;
  for (double e : x) mean += e;
  mean /= static_cast<double>(std::max<std::size_t>(n, 1));
  std::vector<double> eta(grid.num_nodes(), 0.0);
  for (std::size_t k = 0; k < n; ++k) eta[grid.interior_nodes()[k]] = x[k] - mean;
  return eta;
}

OrderParameterField initial_field(const GLModel& model, std::vector<double> theta,
                                  std::uint64_t seed) {
  const Grid2D& grid = model.grid();
  const std::vector<double> eta = coulomb_gauge(model, theta);
  std::mt19937_64 rng(seed);
  // Explicit 53-bit mapping keeps the stream identical across standard
  // libraries (std::uniform_real_distribution is implementation-defined).
  auto uniform = [&rng]() { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  OrderParameterField f;
  f.v.assign(grid.num_nodes(), 0.0);
  f.theta = std::move(theta);
  for (std::size_t id : grid.interior_nodes()) {
    const double re = uniform();
    const double im = uniform();
    f.v[id] = model.gamma(id) * (1.0 + 0.1 * cplx(re, im)) * std::polar(1.0, -eta[id]);
  }
  return f;
}

namespace {

double poly_eval(const std::array<double, 5>& c, double t) {
  return (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t;  // increment over c[0]
}

double poly_slope(const std::array<double, 5>& c, double t) {
  return ((4.0 * c[4] * t + 3.0 * c[3]) * t + 2.0 * c[2]) * t + c[1];
}

// First positive stationary point of the quartic, which is a local minimum
// when the initial slope is negative.
double quartic_line_min(const std::array<double, 5>& c) {
  if (!(c[1] < 0.0)) return 0.0;
  double hi = c[2] > 0.0 ? -c[1] / (2.0 * c[2]) : 1.0;
  if (!(hi > 0.0) || !std::isfinite(hi)) hi = 1.0;
  int guard = 0;
  while (poly_slope(c, hi) < 0.0 && guard++ < 200) hi *= 2.0;
  if (poly_slope(c, hi) < 0.0) return hi;  // unbounded direction, caller backtracks
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (poly_slope(c, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double dot_re(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::real(std::conj(a[k]) * b[k]);
  return s;
}

double max_modulus(const std::vector<cplx>& a) {
  double m = 0.0;
  for (const cplx& z : a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

MinimizeResult minimize(const GLModel& model, OrderParameterField init,
                        const MinimizeOptions& opts) {
  model.check(init);
  const Grid2D& grid = model.grid();
  for (std::size_t id = 0; id < init.v.size(); ++id)
    if (!grid.interior(id)) init.v[id] = 0.0;

  MinimizeResult res;
  res.field = std::move(init);
  std::vector<cplx>& v = res.field.v;
  const std::vector<cplx> u = links(res.field.theta);

  auto grad = [&](std::vector<cplx>& g) { GLKernels::gradient(model, v, u, g); };
  auto line = [&](const std::vector<cplx>& p) { return GLKernels::line(model, v, p, u); };

  std::vector<cplx> g, g_prev, p;
  grad(g);
  res.grad_norm = max_modulus(g);
  p.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) p[k] = -g[k];
  int since_restart = 0;

  while (res.grad_norm > opts.grad_tol && res.iterations < opts.max_iters) {
    ++res.iterations;
    std::array<double, 5> c = line(p);
    if (!(c[1] < 0.0)) {
      // Not a descent direction: fall back to steepest descent.
      for (std::size_t k = 0; k < g.size(); ++k) p[k] = -g[k];
      since_restart = 0;
      c = line(p);
      if (!(c[1] < 0.0)) break;
    }
    double t = quartic_line_min(c);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      if (poly_eval(c, t) <= 1e-4 * t * c[1]) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += t * p[k];

    g_prev.swap(g);
    grad(g);
    res.grad_norm = max_modulus(g);
    ++since_restart;
    double beta = 0.0;
    if (since_restart < opts.restart_every) {
      const double denom = dot_re(g_prev, g_prev);
      double num = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k)
        num += std::real(std::conj(g[k]) * (g[k] - g_prev[k]));
      beta = denom > 0.0 ? std::max(0.0, num / denom) : 0.0;
    } else {
      since_restart = 0;
    }
    for (std::size_t k = 0; k < g.size(); ++k) p[k] = -g[k] + beta * p[k];
  }
  res.converged = res.grad_norm <= opts.grad_tol;
  res.energy = model.energy(res.field);
  return res;
}

double renormalized_energy(const GLModel& model, const OrderParameterField& field,
                           const EffectivePotential& pot, const ThicknessProfile& thick,
                           double lambda) {
  const Grid2D& grid = model.grid();
  for (std::size_t id : grid.interior_nodes())
    require(std::abs(thick.d[id] - 1.0) <= 1e-12, ErrorCode::kInvalidHypothesis,
            "renormalized energy requires d == 1 throughout omega");
  double a2 = 0.0;
  for (std::size_t id : grid.interior_nodes()) a2 += norm2(pot.a0[id]);
  return model.energy(field).total - 0.5 * lambda * lambda * a2 * grid.cell_area();
}

}  // namespace tfgl
