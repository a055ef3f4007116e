#include "thinfilm_gl/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thinfilm_gl/error.hpp"

namespace tfgl {

void validate_unit(const Vec3& a) {
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  if (!(std::abs(n - 1.0) <= 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "field direction alpha must be a unit vector, |alpha| = " << n;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

AppliedField AppliedField::make(double lambda, Vec3 alpha, double kappa) {
  require(lambda >= 0.0, ErrorCode::kInvalidArgument, "field.lambda must be >= 0");
  require(kappa > 0.0, ErrorCode::kInvalidArgument, "field.kappa must be > 0");
  validate_unit(alpha);
  return AppliedField{lambda, alpha, kappa};
}

RegimeSpec RegimeSpec::constant(double rho) {
  RegimeSpec s{RhoLaw::kConstant, rho, 0.0};
  s.validate();
  return s;
}
RegimeSpec RegimeSpec::divergent(double c, double p) {
  RegimeSpec s{RhoLaw::kDivergent, c, p};
  s.validate();
  return s;
}
RegimeSpec RegimeSpec::critical(double L) {
  RegimeSpec s{RhoLaw::kCritical, L, 1.0};
  s.validate();
  return s;
}
RegimeSpec RegimeSpec::supercritical(double c, double q) {
  RegimeSpec s{RhoLaw::kSupercritical, c, q};
  s.validate();
  return s;
}

void RegimeSpec::validate() const {
  switch (law) {
    case RhoLaw::kConstant:
      require(coefficient >= 0.0 && std::isfinite(coefficient),
              ErrorCode::kInvalidConfig, "constant rho must lie in [0, inf)");
      break;
    case RhoLaw::kDivergent:
      require(coefficient > 0.0, ErrorCode::kInvalidConfig, "divergent law needs c > 0");
      require(exponent > 0.0 && exponent < 1.0, ErrorCode::kInvalidConfig,
              "divergent law needs p in (0, 1)");
      break;
    case RhoLaw::kCritical:
      require(coefficient > 0.0, ErrorCode::kInvalidConfig, "critical law needs L > 0");
      require(exponent == 1.0, ErrorCode::kInvalidConfig,
              "critical law has exponent 1");
      break;
    case RhoLaw::kSupercritical:
      require(coefficient > 0.0, ErrorCode::kInvalidConfig,
              "supercritical law needs c > 0");
      require(exponent > 1.0, ErrorCode::kInvalidConfig,
              "supercritical law needs q > 1");
      break;
  }
}

double RegimeSpec::rho(double eps) const {
  if (law == RhoLaw::kConstant) return coefficient;
  return coefficient / std::pow(eps, exponent);
}

Regime classify_regime(const RegimeSpec& spec) {
  // eps * rho(eps) behaves like eps^(1 - exponent): the exponent alone
  // decides the limit, and for the constant law rho itself stays bounded.
  switch (spec.law) {
    case RhoLaw::kConstant: return Regime::kSubcriticalFinite;
    case RhoLaw::kDivergent: return Regime::kSubcriticalInfinite;
    case RhoLaw::kCritical: return Regime::kCritical;
    case RhoLaw::kSupercritical: return Regime::kSupercritical;
  }
  return Regime::kCritical;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kSubcriticalFinite: return "sub-finite";
    case Regime::kSubcriticalInfinite: return "sub-infinite";
    case Regime::kCritical: return "critical";
    case Regime::kSupercritical: return "super";
  }
  return "?";
}

RhoLaw parse_rho_law(const std::string& name) {
  if (name == "constant") return RhoLaw::kConstant;
  if (name == "divergent") return RhoLaw::kDivergent;
  if (name == "critical") return RhoLaw::kCritical;
  if (name == "supercritical") return RhoLaw::kSupercritical;
  fail(ErrorCode::kInvalidConfig, "regime.law: unknown law '" + name +
                                      "' (constant|divergent|critical|supercritical)");
}

const char* rho_law_name(RhoLaw law) {
  switch (law) {
    case RhoLaw::kConstant: return "constant";
    case RhoLaw::kDivergent: return "divergent";
    case RhoLaw::kCritical: return "critical";
    case RhoLaw::kSupercritical: return "supercritical";
  }
  return "?";
}

namespace {

Vec2 potential_at(Vec2 p, double m, const Vec3& alpha, PotentialKind kind) {
  if (kind == PotentialKind::kSubcriticalPerp) return {-0.5 * p.y, 0.5 * p.x};
  return {alpha[1] * m - 0.5 * alpha[2] * p.y, -alpha[0] * m + 0.5 * alpha[2] * p.x};
}

// Derivative of a nodal field along one axis: centred where both neighbours
// are interior, one-sided otherwise, zero for an isolated node.
template <typename Get>
double axis_derivative(const Grid2D& grid, int i, int j, int di, int dj, double h,
                       Get get) {
  const bool fwd = grid.interior(i + di, j + dj);
  const bool bwd = grid.interior(i - di, j - dj);
  const std::size_t c = grid.node_id(i, j);
  if (fwd && bwd)
    return (get(grid.node_id(i + di, j + dj)) - get(grid.node_id(i - di, j - dj))) /
           (2.0 * h);
  if (fwd) return (get(grid.node_id(i + di, j + dj)) - get(c)) / h;
  if (bwd) return (get(c) - get(grid.node_id(i - di, j - dj))) / h;
  return 0.0;
}

}  // namespace

EffectivePotential build_effective_potential(const Grid2D& grid,
                                             const ThicknessProfile* thick,
                                             const Vec3& alpha, PotentialKind kind) {
  validate_unit(alpha);
  require(kind == PotentialKind::kSubcriticalPerp || thick != nullptr,
          ErrorCode::kInvalidArgument,
          "the critical effective potential needs a thickness profile");
  EffectivePotential pot;
  pot.kind = kind;
  pot.alpha = alpha;
  const std::size_t n = grid.num_nodes();
  pot.a0.assign(n, Vec2{});
  pot.ax_edge.assign(n, 0.0);
  pot.ay_edge.assign(n, 0.0);
  pot.h0.assign(n, 0.0);

  auto centroid = [&](Vec2 p, double fallback) {
    if (kind == PotentialKind::kSubcriticalPerp) return 0.0;
    if (thick->f_spec && thick->g_spec) return thick->centroid_at(p);
    return fallback;
  };

  for (std::size_t id : grid.interior_nodes()) {
    const double m = kind == PotentialKind::kCriticalOblique ? thick->m[id] : 0.0;
    pot.a0[id] = potential_at(grid.position(id), m, alpha, kind);
  }
  for (std::size_t id : grid.interior_nodes()) {
    const int i = grid.node_i(id), j = grid.node_j(id);
    const Vec2 p = grid.position(id);
    if (grid.interior(i + 1, j)) {
      const std::size_t e = grid.node_id(i + 1, j);
      const Vec2 mid{p.x + 0.5 * grid.hx(), p.y};
      const double m_avg =
          kind == PotentialKind::kCriticalOblique ? 0.5 * (thick->m[id] + thick->m[e]) : 0.0;
      pot.ax_edge[id] = potential_at(mid, centroid(mid, m_avg), alpha, kind).x;
    }
    if (grid.interior(i, j + 1)) {
      const std::size_t e = grid.node_id(i, j + 1);
      const Vec2 mid{p.x, p.y + 0.5 * grid.hy()};
      const double m_avg =
          kind == PotentialKind::kCriticalOblique ? 0.5 * (thick->m[id] + thick->m[e]) : 0.0;
      pot.ay_edge[id] = potential_at(mid, centroid(mid, m_avg), alpha, kind).y;
    }
  }
  for (std::size_t id : grid.interior_nodes()) {
    const int i = grid.node_i(id), j = grid.node_j(id);
    const double day_dx = axis_derivative(grid, i, j, 1, 0, grid.hx(),
                                          [&](std::size_t k) { return pot.a0[k].y; });
    const double dax_dy = axis_derivative(grid, i, j, 0, 1, grid.hy(),
                                          [&](std::size_t k) { return pot.a0[k].x; });
    pot.h0[id] = day_dx - dax_dy;
  }
  return pot;
}

std::optional<std::vector<double>> analytic_effective_field(
    const Grid2D& grid, const ThicknessProfile& thick, const EffectivePotential& pot) {
  std::vector<double> h0(grid.num_nodes(), 0.0);
  if (pot.kind == PotentialKind::kSubcriticalPerp) {
    for (std::size_t id : grid.interior_nodes()) h0[id] = 1.0;
    return h0;
  }
  if (!thick.grad_m) return std::nullopt;
  const auto& a = pot.alpha;
  for (std::size_t id : grid.interior_nodes()) {
    const Vec2 gm = (*thick.grad_m)[id];
    h0[id] = a[2] - a[0] * gm.x - a[1] * gm.y;
  }
  return h0;
}

double gamma_kappa(double d, double h_par_sq, double kappa) {
  const double s = 1.0 - d * d * h_par_sq / (12.0 * kappa * kappa);
  return std::sqrt(std::max(0.0, s));
}

double normal_state_threshold(double kappa, double d_max) {
  require(kappa > 0.0 && d_max > 0.0, ErrorCode::kInvalidArgument,
          "normal_state_threshold needs kappa > 0 and d_max > 0");
  return std::sqrt(12.0) * kappa / d_max;
}

}  // namespace tfgl
