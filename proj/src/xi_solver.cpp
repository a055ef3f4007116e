#include "thinfilm_gl/xi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sparse.hpp"
#include "thinfilm_gl/error.hpp"

namespace tfgl {

namespace {

constexpr double kMinFraction = 1e-10;

struct Arm {
  bool inside;
  double length;
  double coeff;  // face coefficient
  std::size_t neighbor;
};

// Builds the four arms of the stencil at `id`: E, W, N, S.
std::array<Arm, 4> stencil_arms(const Grid2D& grid, const ThicknessProfile& thick,
                                std::size_t id) {
  const int i = grid.node_i(id), j = grid.node_j(id);
  const Vec2 p = grid.position(id);
  static constexpr int kDi[4] = {1, -1, 0, 0};
  static constexpr int kDj[4] = {0, 0, 1, -1};
  std::array<Arm, 4> arms{};
  for (int k = 0; k < 4; ++k) {
    const int ii = i + kDi[k], jj = j + kDj[k];
    const double h = kDi[k] != 0 ? grid.hx() : grid.hy();
    if (grid.interior(ii, jj)) {
      const std::size_t nb = grid.node_id(ii, jj);
      arms[k] = {true, h, 2.0 / (thick.d[id] + thick.d[nb]), nb};
    } else {
      const double t = grid.domain().boundary_fraction(p, grid.position(ii, jj));
      arms[k] = {false, std::max(t, kMinFraction) * h, 1.0 / thick.d[id], 0};
    }
  }
  return arms;
}

// Row of the negated operator -div((1/d) grad .), which has a positive
// diagonal. Entries are appended to `mat` in dense interior numbering.
void assemble_row(const Grid2D& grid, const ThicknessProfile& thick, std::size_t id,
                  detail::CsrMatrix& mat) {
  const auto arms = stencil_arms(grid, thick, id);
  double diag = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const Arm& a = arms[2 * axis];
    const Arm& b = arms[2 * axis + 1];
    const double span = 0.5 * (a.length + b.length);
    for (const Arm* arm : {&a, &b}) {
      const double w = arm->coeff / (span * arm->length);
      diag += w;
      if (arm->inside) mat.push(static_cast<std::size_t>(grid.interior_index(arm->neighbor)), -w);
    }
  }
  mat.push(static_cast<std::size_t>(grid.interior_index(id)), diag);
  // Keep columns sorted so the row layout is canonical.
  const std::size_t begin = mat.row_ptr.back();
  std::vector<std::size_t> order(mat.col.size() - begin);
  std::iota(order.begin(), order.end(), begin);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return mat.col[x] < mat.col[y]; });
  std::vector<std::size_t> c;
  std::vector<double> v;
  for (std::size_t k : order) {
    c.push_back(mat.col[k]);
    v.push_back(mat.val[k]);
  }
  std::copy(c.begin(), c.end(), mat.col.begin() + static_cast<long>(begin));
  std::copy(v.begin(), v.end(), mat.val.begin() + static_cast<long>(begin));
  mat.end_row();
}

detail::CsrMatrix assemble(const Grid2D& grid, const ThicknessProfile& thick) {
  detail::CsrMatrix mat;
  for (std::size_t id : grid.interior_nodes()) assemble_row(grid, thick, id, mat);
  return mat;
}

void check_inputs(const Grid2D& grid, const ThicknessProfile& thick) {
  require(thick.d.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "thickness profile does not match the grid");
  require(grid.num_interior() > 0, ErrorCode::kInvalidArgument,
          "grid has no interior nodes");
  for (std::size_t id : grid.interior_nodes())
    require(thick.d[id] > 0.0, ErrorCode::kInvalidThickness,
            "film thickness must be positive at every interior node");
}

}  // namespace

XiField solve_xi0(const Grid2D& grid, const ThicknessProfile& thick,
                  const EffectivePotential& pot, const XiOptions& opts) {
  check_inputs(grid, thick);
  require(pot.h0.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "effective potential does not match the grid");
  XiField out;
  std::optional<std::vector<double>> analytic;
  if (opts.rhs != RhsMode::kDiscrete) analytic = analytic_effective_field(grid, thick, pot);
  if (opts.rhs == RhsMode::kAnalytic && !analytic)
    fail(ErrorCode::kInvalidArgument, "no analytic centroid gradient for this profile");
  out.analytic_rhs = analytic.has_value();
  out.rhs = analytic ? std::move(*analytic) : pot.h0;

  const detail::CsrMatrix mat = assemble(grid, thick);
  const std::size_t n = grid.num_interior();
  std::vector<double> b(n), x(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) b[k] = -out.rhs[grid.interior_nodes()[k]];
  const detail::KrylovResult kr = detail::bicgstab(mat, b, x, opts.tol, opts.max_iters);
  out.iterations = kr.iterations;
  out.residual_norm = kr.residual_max;
  if (!kr.converged) {
    std::ostringstream os;
    os << "xi0 solve did not converge in " << kr.iterations
       << " iterations, residual " << kr.residual_max;
    fail(ErrorCode::kSolverFailure, os.str());
  }
  out.xi0.assign(grid.num_nodes(), 0.0);
  for (std::size_t k = 0; k < n; ++k) out.xi0[grid.interior_nodes()[k]] = x[k];
  return out;
}

double xi_residual(const Grid2D& grid, const ThicknessProfile& thick,
                   const std::vector<double>& xi0, const std::vector<double>& rhs) {
  check_inputs(grid, thick);
  const detail::CsrMatrix mat = assemble(grid, thick);
  std::vector<double> x(grid.num_interior()), ax;
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = xi0[grid.interior_nodes()[k]];
  mat.multiply(x, ax);
  double r = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    r = std::max(r, std::abs(-rhs[grid.interior_nodes()[k]] - ax[k]));
  return r;
}

double max_abs_xi_over_d(const Grid2D& grid, const XiField& xi,
                         const ThicknessProfile& thick) {
  double m = 0.0;
  for (std::size_t id : grid.interior_nodes())
    m = std::max(m, std::abs(xi.xi0[id] / thick.d[id]));
  return m;
}

LambdaSet find_lambda_set(const Grid2D& grid, const XiField& xi,
                          const ThicknessProfile& thick, double cluster_radius,
                          double rel_tol) {
  require(rel_tol >= 0.0 && rel_tol < 1.0, ErrorCode::kInvalidArgument,
          "lambda rel_tol must lie in [0, 1)");
  LambdaSet set;
  set.rel_tol = rel_tol;
  set.cluster_radius = cluster_radius > 0.0 ? cluster_radius : 4.0 * grid.hx();
  set.max_abs = max_abs_xi_over_d(grid, xi, thick);
  if (set.max_abs < 1e-14)
    fail(ErrorCode::kEmptyLambda, "max |xi0/d| vanishes: no vortex attractor set");

  auto phi = [&](std::size_t id) { return xi.xi0[id] / thick.d[id]; };
  const double threshold = (1.0 - rel_tol) * set.max_abs;
  std::vector<std::size_t> cand;
  for (std::size_t id : grid.interior_nodes())
    if (std::abs(phi(id)) >= threshold) cand.push_back(id);

  // Single-linkage clustering by union-find; candidates are few.
  std::vector<std::size_t> parent(cand.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const double r2 = set.cluster_radius * set.cluster_radius;
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a + 1; b < cand.size(); ++b)
      if (norm2(grid.position(cand[a]) - grid.position(cand[b])) <= r2) {
        const std::size_t ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }

  for (std::size_t root = 0; root < cand.size(); ++root) {
    if (find(root) != root) continue;
    LambdaPoint pt;
    Vec2 acc{};
    double wsum = 0.0;
    std::size_t best = cand[root];
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (find(a) != root) continue;
      const std::size_t id = cand[a];
      ++pt.node_count;
      const double w = std::abs(phi(id)) - threshold;
      acc += w * grid.position(id);
      wsum += w;
      if (std::abs(phi(id)) > std::abs(phi(best))) best = id;
    }
    pt.position = wsum > 0.0 ? (1.0 / wsum) * acc : grid.position(best);
    pt.xi_over_d = phi(best);
    pt.degree_sign = xi.xi0[best] < 0.0 ? 1 : -1;

    const int i = grid.node_i(best), j = grid.node_j(best);
    const double hx = grid.hx(), hy = grid.hy();
    auto at = [&](int di, int dj) {
      return grid.interior(i + di, j + dj) ? phi(grid.node_id(i + di, j + dj)) : 0.0;
    };
    pt.hessian[0] = (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (hx * hx);
    pt.hessian[2] = (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (hy * hy);
    pt.hessian[1] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hx * hy);
    set.points.push_back(pt);
  }
  return set;
}

double critical_field_from_max(double max_abs, double kappa) {
  require(kappa > 1.0, ErrorCode::kInvalidArgument, "critical field needs kappa > 1");
  require(max_abs > 0.0, ErrorCode::kUndefinedCriticalField,
          "max |xi0/d| = 0: the lower critical field is undefined");
  return std::log(kappa) / (2.0 * max_abs);
}

double critical_field(const Grid2D& grid, const XiField& xi,
                      const ThicknessProfile& thick, double kappa) {
  return critical_field_from_max(max_abs_xi_over_d(grid, xi, thick), kappa);
}

}  // namespace tfgl
