#include "thinfilm_gl/vortex.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "thinfilm_gl/error.hpp"

namespace tfgl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Edge lookup by tail node: index of the x-edge and y-edge starting there.
struct EdgeIndex {
  std::vector<long> x, y;
  EdgeIndex(const Grid2D& grid, const std::vector<Edge>& edges)
      : x(grid.num_nodes(), -1), y(grid.num_nodes(), -1) {
    for (std::size_t k = 0; k < edges.size(); ++k)
      (edges[k].horizontal ? x : y)[edges[k].tail] = static_cast<long>(k);
  }
};

struct Step {
  std::size_t edge;
  bool forward;
};

// Gauge-invariant phase increment along one traversed edge: the principal
// argument of v_h conj(U v_t) plus the link angle, both with orientation.
double phase_step(const OrderParameterField& f, const std::vector<Edge>& edges, Step s) {
  const Edge& e = edges[s.edge];
  const double th = f.theta[s.edge];
  const cplx q = f.v[e.head] * std::conj(std::polar(1.0, th) * f.v[e.tail]);
  const double a = std::arg(q) + th;
  return s.forward ? a : -a;
}

}  // namespace

VortexSet detect_vortices(const Grid2D& grid, const OrderParameterField& field,
                          double min_modulus, const std::vector<double>& gammas) {
  require(min_modulus > 0.0 && min_modulus < 1.0, ErrorCode::kInvalidArgument,
          "min_modulus must lie in (0, 1)");
  const std::vector<Edge> edges = interior_edges(grid);
  require(field.v.size() == grid.num_nodes() && field.theta.size() == edges.size(),
          ErrorCode::kInvalidArgument, "order parameter field does not match the grid");
  require(gammas.empty() || gammas.size() == grid.num_nodes(), ErrorCode::kInvalidArgument,
          "gamma field does not match the grid");
  const EdgeIndex idx(grid, edges);

  struct Hit {
    Vec2 center;
    int degree;
    double weight;
  };
  VortexSet out;
  std::vector<Hit> hits;
  for (std::size_t id : grid.interior_nodes()) {
    const int i = grid.node_i(id), j = grid.node_j(id);
    if (!(grid.interior(i + 1, j) && grid.interior(i + 1, j + 1) && grid.interior(i, j + 1)))
      continue;
    const std::size_t c[4] = {id, grid.node_id(i + 1, j), grid.node_id(i + 1, j + 1),
                              grid.node_id(i, j + 1)};
    double mod_sum = 0.0;
    bool low = false;
    for (std::size_t n : c) {
      const double a = std::abs(field.v[n]);
      if (field.v[n] == cplx(0.0, 0.0)) {
        std::ostringstream os;
        os << "plaquette (" << i << ", " << j << ") has a corner with v = 0";
        fail(ErrorCode::kDegeneratePlaquette, os.str());
      }
      const double g = gammas.empty() ? 1.0 : gammas[n];
      if (a <= min_modulus * g) low = true;
      mod_sum += a;
    }
    if (low) ++out.low_modulus_plaquettes;
    const Step loop[4] = {{static_cast<std::size_t>(idx.x[c[0]]), true},
                          {static_cast<std::size_t>(idx.y[c[1]]), true},
                          {static_cast<std::size_t>(idx.x[c[3]]), false},
                          {static_cast<std::size_t>(idx.y[c[0]]), false}};
    double total = 0.0;
    for (const Step& s : loop) total += phase_step(field, edges, s);
    const int deg = static_cast<int>(std::lround(total / kTwoPi));
    if (deg == 0) continue;
    const Vec2 p = grid.position(id);
    hits.push_back({{p.x + 0.5 * grid.hx(), p.y + 0.5 * grid.hy()}, deg,
                    1.0 / (0.25 * mod_sum + 1e-12)});
  }

  // Single-linkage merge of same-sign plaquettes, deterministic row-major order.
  std::vector<std::size_t> parent(hits.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const double r = 2.0 * std::max(grid.hx(), grid.hy()) * (1.0 + 1e-9);
  for (std::size_t a = 0; a < hits.size(); ++a)
    for (std::size_t b = a + 1; b < hits.size(); ++b)
      if ((hits[a].degree > 0) == (hits[b].degree > 0) &&
          norm(hits[a].center - hits[b].center) <= r) {
        const std::size_t ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
  for (std::size_t root = 0; root < hits.size(); ++root) {
    if (find(root) != root) continue;
    Vortex vx;
    vx.plaquettes = 0;
    Vec2 acc{};
    double wsum = 0.0;
    for (std::size_t a = 0; a < hits.size(); ++a) {
      if (find(a) != root) continue;
      vx.degree += hits[a].degree;
      ++vx.plaquettes;
      acc += hits[a].weight * hits[a].center;
      wsum += hits[a].weight;
    }
    vx.position = (1.0 / wsum) * acc;
    out.total_degree += vx.degree;
    if (vx.degree != 0) out.vortices.push_back(vx);
  }
  return out;
}

int contour_winding(const Grid2D& grid, const OrderParameterField& field) {
  const std::vector<Edge> edges = interior_edges(grid);
  require(field.v.size() == grid.num_nodes() && field.theta.size() == edges.size(),
          ErrorCode::kInvalidArgument, "order parameter field does not match the grid");
  const EdgeIndex idx(grid, edges);
  // Net orientation of each edge over all complete plaquettes: interior
  // edges cancel, the outer contour keeps +1 or -1.
  std::map<std::size_t, int> orient;
  for (std::size_t id : grid.interior_nodes()) {
    const int i = grid.node_i(id), j = grid.node_j(id);
    if (!(grid.interior(i + 1, j) && grid.interior(i + 1, j + 1) && grid.interior(i, j + 1)))
      continue;
    orient[static_cast<std::size_t>(idx.x[id])] += 1;
    orient[static_cast<std::size_t>(idx.y[grid.node_id(i + 1, j)])] += 1;
    orient[static_cast<std::size_t>(idx.x[grid.node_id(i, j + 1)])] -= 1;
    orient[static_cast<std::size_t>(idx.y[id])] -= 1;
  }
  double total = 0.0;
  for (const auto& [k, o] : orient)
    if (o != 0) total += phase_step(field, edges, {k, o > 0});
  return static_cast<int>(std::lround(total / kTwoPi));
}

MatchReport match_predictions(const VortexSet& found, const LambdaSet& predicted,
                              double radius) {
  require(radius > 0.0, ErrorCode::kInvalidArgument, "match radius must be positive");
  MatchReport rep;
  std::vector<char> used(found.vortices.size(), 0);
  rep.all_matched = !predicted.points.empty();
  for (const LambdaPoint& lp : predicted.points) {
    LambdaMatch m;
    m.position = lp.position;
    m.predicted_sign = lp.degree_sign;
    for (std::size_t k = 0; k < found.vortices.size(); ++k) {
      const Vortex& v = found.vortices[k];
      if (norm(v.position - lp.position) > radius) continue;
      used[k] = 1;
      ++m.count;
      m.degree_sum += v.degree;
      if ((v.degree > 0 ? 1 : -1) != lp.degree_sign) m.sign_mismatch = true;
    }
    if (m.count == 0 || m.sign_mismatch) rep.all_matched = false;
    rep.points.push_back(m);
  }
  for (std::size_t k = 0; k < found.vortices.size(); ++k)
    if (!used[k]) rep.unmatched.push_back(found.vortices[k]);
  return rep;
}

}  // namespace tfgl
