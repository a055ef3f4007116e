#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "thinfilm_gl/geometry.hpp"

namespace tfgl {

using Vec3 = std::array<double, 3>;

// Constant applied field h_ex = lambda * alpha, with |alpha| = 1.
struct AppliedField {
  double lambda = 0.0;
  Vec3 alpha{0.0, 0.0, 1.0};
  double kappa = 1.0;

  static AppliedField make(double lambda, Vec3 alpha, double kappa);

  Vec3 h() const { return {lambda * alpha[0], lambda * alpha[1], lambda * alpha[2]}; }
  // |h_ex'|^2, the squared in-plane part.
  double h_par_sq() const {
    return lambda * lambda * (alpha[0] * alpha[0] + alpha[1] * alpha[1]);
  }
};

void validate_unit(const Vec3& alpha);

// Law for the parallel-field amplification rho(eps).
enum class RhoLaw {
  kConstant,       // rho = c, c in [0, inf)
  kDivergent,      // rho = c / eps^p, p in (0, 1)
  kCritical,       // rho = L / eps, L > 0
  kSupercritical,  // rho = c / eps^q, q > 1
};

struct RegimeSpec {
  RhoLaw law = RhoLaw::kCritical;
  double coefficient = 1.0;  // c, or L for the critical law
  double exponent = 1.0;     // p or q; fixed to 1 for the critical law

  static RegimeSpec constant(double rho);
  static RegimeSpec divergent(double c, double p);
  static RegimeSpec critical(double L);
  static RegimeSpec supercritical(double c, double q);

  void validate() const;
  double rho(double eps) const;
};

enum class Regime { kSubcriticalFinite, kSubcriticalInfinite, kCritical, kSupercritical };

Regime classify_regime(const RegimeSpec& spec);
const char* regime_name(Regime r);
RhoLaw parse_rho_law(const std::string& name);
const char* rho_law_name(RhoLaw law);

enum class PotentialKind { kSubcriticalPerp, kCriticalOblique };

// Fixed 2D vector potential A0 of the reduced functional, sampled at nodes
// and at edge midpoints (x-edge (i,j)-(i+1,j) and y-edge (i,j)-(i,j+1) are
// indexed by the id of their lower node). Only edges joining two interior
// nodes are populated.
struct EffectivePotential {
  PotentialKind kind = PotentialKind::kSubcriticalPerp;
  Vec3 alpha{0.0, 0.0, 1.0};
  std::vector<Vec2> a0;
  std::vector<double> ax_edge;  // x-component at x-edge midpoints
  std::vector<double> ay_edge;  // y-component at y-edge midpoints
  std::vector<double> h0;       // discrete curl of a0
};

// Throws Error(kInvalidArgument) for a non-unit alpha. `thick` is required
// for the critical kind and ignored otherwise.
EffectivePotential build_effective_potential(const Grid2D& grid,
                                             const ThicknessProfile* thick,
                                             const Vec3& alpha, PotentialKind kind);

// Closed-form curl of A0 where the centroid gradient is known:
// alpha3 - alpha1 dm/dx1 - alpha2 dm/dx2 (critical), 1 (subcritical).
std::optional<std::vector<double>> analytic_effective_field(
    const Grid2D& grid, const ThicknessProfile& thick, const EffectivePotential& pot);

// Pointwise density-suppression factor, clamped to 0 beyond the normal-state
// threshold.
double gamma_kappa(double d, double h_par_sq, double kappa);

// Smallest |h_ex'| at which gamma_kappa vanishes somewhere in omega.
double normal_state_threshold(double kappa, double d_max);

}  // namespace tfgl
