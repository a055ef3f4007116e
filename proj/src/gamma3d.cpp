#include "thinfilm_gl/gamma3d.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "thinfilm_gl/error.hpp"

namespace tfgl {

GaussRule gauss_legendre(int n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "Gauss-Legendre rule needs n >= 1");
  GaussRule r;
  r.nodes.assign(static_cast<std::size_t>(n), 0.0);
  r.weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like starting guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

ComplexGradient nodal_gradient(const Grid2D& grid, const std::vector<cplx>& f) {
  require(f.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "field does not match the grid");
  ComplexGradient g;
  g.dx.assign(f.size(), 0.0);
  g.dy.assign(f.size(), 0.0);
  auto diff = [&](int i, int j, int di, int dj, double h) -> cplx {
    const bool fwd = grid.interior(i + di, j + dj);
    const bool bwd = grid.interior(i - di, j - dj);
    const cplx c = f[grid.node_id(i, j)];
    if (fwd && bwd)
      return (f[grid.node_id(i + di, j + dj)] - f[grid.node_id(i - di, j - dj)]) / (2.0 * h);
    if (fwd) return (f[grid.node_id(i + di, j + dj)] - c) / h;
    if (bwd) return (c - f[grid.node_id(i - di, j - dj)]) / h;
    return 0.0;
  };
  for (std::size_t id : grid.interior_nodes()) {
    const int i = grid.node_i(id), j = grid.node_j(id);
    g.dx[id] = diff(i, j, 1, 0, grid.hx());
    g.dy[id] = diff(i, j, 0, 1, grid.hy());
  }
  return g;
}

namespace {

void check_payload(const Grid2D& grid, const std::vector<cplx>& v,
                   const std::vector<cplx>& b) {
  require(v.size() == grid.num_nodes() && b.size() == grid.num_nodes(),
          ErrorCode::kInvalidConfig, "recovery payload (v, b) must cover the grid");
}

SlabConfig3D base_config(const Grid2D& grid, const ThicknessProfile& thick, double eps,
                         int nz) {
  require(nz >= 2, ErrorCode::kInvalidArgument, "nz must be at least 2");
  require(eps > 0.0, ErrorCode::kInvalidArgument, "epsilon must be positive");
  require(thick.d.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "thickness profile does not match the grid");
  SlabConfig3D c;
  c.grid = &grid;
  c.thick = &thick;
  c.nz = nz;
  c.epsilon = eps;
  return c;
}

// In-plane field (h1, h2), perpendicular h3.
struct FieldParts {
  double h1, h2, h3;
};
FieldParts parts(const AppliedField& f) {
  return {f.lambda * f.alpha[0], f.lambda * f.alpha[1], f.lambda * f.alpha[2]};
}

double a3(const FieldParts& h, Vec2 p, double s) { return 0.5 * s * (h.h1 * p.y - h.h2 * p.x); }

}  // namespace

SlabConfig3D recovery_critical(const Grid2D& grid, const ThicknessProfile& thick,
                               std::vector<cplx> v, std::vector<cplx> b, double eps,
                               int nz) {
  check_payload(grid, v, b);
  SlabConfig3D c = base_config(grid, thick, eps, nz);
  c.regime = Regime::kCritical;
  c.coupling = 1.0;
  c.v = std::move(v);
  c.b = std::move(b);
  return c;
}

SlabConfig3D recovery_subcritical(const Grid2D& grid, const ThicknessProfile& thick,
                                  std::vector<cplx> v, std::vector<cplx> b, double eps,
                                  const RegimeSpec& spec, int nz) {
  check_payload(grid, v, b);
  spec.validate();
  const Regime r = classify_regime(spec);
  require(r == Regime::kSubcriticalFinite || r == Regime::kSubcriticalInfinite,
          ErrorCode::kInvalidConfig, "subcritical recovery needs a subcritical rho law");
  SlabConfig3D c = base_config(grid, thick, eps, nz);
  c.regime = r;
  c.coupling = eps * spec.rho(eps);
  c.v = std::move(v);
  c.b = std::move(b);
  return c;
}

SlabConfig3D recovery_supercritical(const Grid2D& grid, const ThicknessProfile& thick,
                                    double eps, int nz) {
  SlabConfig3D c = base_config(grid, thick, eps, nz);
  c.regime = Regime::kSupercritical;
  c.coupling = 0.0;
  return c;
}

cplx recovery_order_parameter(const SlabConfig3D& cfg, const AppliedField& field,
                              std::size_t id, double x3) {
  if (cfg.v.empty()) return 0.0;
  const Vec2 p = cfg.grid->position(id);
  const double phase = a3(parts(field), p, cfg.coupling) * x3;
  return std::polar(1.0, phase) * (cfg.v[id] + cfg.epsilon * cfg.b[id] * x3);
}

cplx recovery_vertical_derivative(const SlabConfig3D& cfg, const AppliedField& field,
                                  std::size_t id, double x3) {
  if (cfg.v.empty()) return 0.0;
  const Vec2 p = cfg.grid->position(id);
  const double A3 = a3(parts(field), p, cfg.coupling);
  // d/dx3 of e^{i A3 x3}(v + eps b x3) is i A3 u + e^{i A3 x3} eps b; the
  // i A3 u part cancels exactly against -i A3 u.
  return std::polar(1.0, A3 * x3) * cfg.b[id];
}

Energy3D evaluate_3d_energy(const SlabConfig3D& cfg, const AppliedField& field,
                            double kappa) {
  require(cfg.grid && cfg.thick, ErrorCode::kInvalidArgument, "slab config has no grid");
  require(cfg.nz >= 2, ErrorCode::kInvalidArgument, "nz must be at least 2");
  require(kappa > 0.0, ErrorCode::kInvalidArgument, "kappa must be positive");
  const Grid2D& grid = *cfg.grid;
  const ThicknessProfile& t = *cfg.thick;
  const bool normal = cfg.regime == Regime::kSupercritical;
  if (!normal) check_payload(grid, cfg.v, cfg.b);
  const GaussRule rule = gauss_legendre(cfg.nz);
  const FieldParts h = parts(field);
  const double s = cfg.coupling;
  const double area = grid.cell_area();
  const double kk = 0.5 * kappa * kappa;

  ComplexGradient gv, gb;
  if (!normal) {
    gv = nodal_gradient(grid, cfg.v);
    gb = nodal_gradient(grid, cfg.b);
  }
  Energy3D e;
  for (std::size_t id : grid.interior_nodes()) {
    const Vec2 p = grid.position(id);
    const double half = 0.5 * t.d[id];
    const Vec2 a_perp{-0.5 * h.h3 * p.y, 0.5 * h.h3 * p.x};
    double hor = 0.0, ver = 0.0, pot = 0.0;
    for (int k = 0; k < cfg.nz; ++k) {
      const double x3 = t.m[id] + half * rule.nodes[static_cast<std::size_t>(k)];
      const double wq = half * rule.weights[static_cast<std::size_t>(k)];
      if (normal) {
        pot += wq * kk;
        continue;
      }
      const cplx w = cfg.v[id] + cfg.epsilon * cfg.b[id] * x3;
      const cplx wx = gv.dx[id] + cfg.epsilon * x3 * gb.dx[id];
      const cplx wy = gv.dy[id] + cfg.epsilon * x3 * gb.dy[id];
      const double ax = a_perp.x + s * x3 * h.h2;
      const double ay = a_perp.y - s * x3 * h.h1;
      const cplx kx = wx - cplx(0.0, ax) * w;
      const cplx ky = wy - cplx(0.0, ay) * w;
      hor += wq * (std::norm(kx) + std::norm(ky));
      ver += wq * std::norm(cfg.b[id]);
      const double q = 1.0 - std::norm(w);
      pot += wq * kk * q * q;
    }
    e.horizontal += 0.5 * area * hor;
    e.vertical += 0.5 * area * ver;
    e.potential += 0.5 * area * pot;
  }
  e.total = e.horizontal + e.vertical + e.potential + e.field;
  return e;
}

double limit_energy(Regime regime, const Grid2D& grid, const ThicknessProfile& thick,
                    const std::vector<cplx>& v, const std::vector<cplx>& b,
                    const AppliedField& field, double kappa) {
  require(kappa > 0.0, ErrorCode::kInvalidArgument, "kappa must be positive");
  require(thick.d.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "thickness profile does not match the grid");
  const double area = grid.cell_area();
  const double kk = 0.5 * kappa * kappa;
  if (regime == Regime::kSupercritical) {
    double vol = 0.0;
    for (std::size_t id : grid.interior_nodes()) vol += thick.d[id] * area;
    return 0.5 * kk * vol;
  }
  check_payload(grid, v, b);
  const FieldParts h = parts(field);
  const bool critical = regime == Regime::kCritical;
  const double hpar2 = h.h1 * h.h1 + h.h2 * h.h2;
  const ComplexGradient gv = nodal_gradient(grid, v);
  double sum = 0.0;
  for (std::size_t id : grid.interior_nodes()) {
    const Vec2 p = grid.position(id);
    const double d = thick.d[id];
    double ax = -0.5 * h.h3 * p.y, ay = 0.5 * h.h3 * p.x;
    if (critical) {
      ax += thick.m[id] * h.h2;
      ay -= thick.m[id] * h.h1;
    }
    const cplx kx = gv.dx[id] - cplx(0.0, ax) * v[id];
    const cplx ky = gv.dy[id] - cplx(0.0, ay) * v[id];
    const double q = 1.0 - std::norm(v[id]);
    double dens = std::norm(kx) + std::norm(ky) + std::norm(b[id]) + kk * q * q;
    if (critical) dens += d * d / 12.0 * hpar2 * std::norm(v[id]);
    sum += 0.5 * d * dens * area;
  }
  return sum;
}

ConvergenceStudy convergence_study(Regime regime, const Grid2D& grid,
                                   const ThicknessProfile& thick,
                                   const std::vector<cplx>& v, const std::vector<cplx>& b,
                                   const AppliedField& field, double kappa,
                                   const std::vector<double>& eps_ladder,
                                   const RegimeSpec& spec, int nz) {
  require(eps_ladder.size() >= 3, ErrorCode::kInvalidArgument,
          "epsilon ladder needs at least three entries");
  for (std::size_t k = 1; k < eps_ladder.size(); ++k)
    require(eps_ladder[k] < eps_ladder[k - 1] && eps_ladder[k] > 0.0,
            ErrorCode::kInvalidArgument, "epsilon ladder must be strictly decreasing");
  ConvergenceStudy st;
  st.regime = regime;
  st.limit = limit_energy(regime, grid, thick, v, b, field, kappa);
  st.exact_tol = 1e-10 * std::max(1.0, std::abs(st.limit));
  st.exact = true;
  st.min_order = std::numeric_limits<double>::infinity();
  for (double eps : eps_ladder) {
    SlabConfig3D cfg;
    switch (regime) {
      case Regime::kCritical: cfg = recovery_critical(grid, thick, v, b, eps, nz); break;
      case Regime::kSubcriticalFinite:
      case Regime::kSubcriticalInfinite:
        cfg = recovery_subcritical(grid, thick, v, b, eps, spec, nz);
        require(cfg.regime == regime, ErrorCode::kInvalidConfig,
                "rho law does not match the requested regime");
        break;
      case Regime::kSupercritical: cfg = recovery_supercritical(grid, thick, eps, nz); break;
    }
    ConvergenceRow row;
    row.epsilon = eps;
    row.energy = evaluate_3d_energy(cfg, field, kappa).total;
    row.error = std::abs(row.energy - st.limit);
    if (row.error > st.exact_tol) st.exact = false;
    if (!st.rows.empty()) {
      const ConvergenceRow& prev = st.rows.back();
      row.order = std::log(prev.error / row.error) / std::log(prev.epsilon / eps);
    }
    st.rows.push_back(row);
  }
  if (st.exact) {
    st.min_order = 0.0;
    for (auto& r : st.rows) r.order = 0.0;
  } else {
    for (std::size_t k = 1; k < st.rows.size(); ++k)
      st.min_order = std::min(st.min_order, st.rows[k].order);
  }
  return st;
}

}  // namespace tfgl
