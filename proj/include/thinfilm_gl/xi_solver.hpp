#pragma once

#include <array>
#include <vector>

#include "thinfilm_gl/field_model.hpp"
#include "thinfilm_gl/geometry.hpp"

namespace tfgl {

enum class RhsMode { kAuto, kAnalytic, kDiscrete };

struct XiOptions {
  double tol = 1e-10;
  int max_iters = 100000;
  RhsMode rhs = RhsMode::kAuto;
};

// Solution of div((1/d) grad xi0) = h0 in omega, xi0 = 0 on the boundary.
struct XiField {
  std::vector<double> xi0;  // zero at exterior nodes
  std::vector<double> rhs;
  double residual_norm = 0.0;
  int iterations = 0;
  bool analytic_rhs = false;
};

// Finite-volume 5-point scheme with harmonic-mean face coefficients. Arms
// that leave the disk end on the exact circle intersection (cut-cell
// Dirichlet closure), which keeps the scheme second order up to the curved
// boundary. Throws Error(kSolverFailure) when the Krylov solve stalls.
XiField solve_xi0(const Grid2D& grid, const ThicknessProfile& thick,
                  const EffectivePotential& pot, const XiOptions& opts = {});

// Max-norm of the discrete residual of `xi0` for the same operator.
double xi_residual(const Grid2D& grid, const ThicknessProfile& thick,
                   const std::vector<double>& xi0, const std::vector<double>& rhs);

struct LambdaPoint {
  Vec2 position;
  double xi_over_d = 0.0;  // signed value at the cluster's extremal node
  int degree_sign = 0;     // +1 iff xi0 < 0 there
  std::size_t node_count = 0;
  // Discrete Hessian of xi0/d at the extremal node (xx, xy, yy); a
  // diagnostic for the nondegeneracy hypothesis, never asserted.
  std::array<double, 3> hessian{0.0, 0.0, 0.0};
};

struct LambdaSet {
  std::vector<LambdaPoint> points;
  double max_abs = 0.0;
  double rel_tol = 1e-2;
  double cluster_radius = 0.0;
};

double max_abs_xi_over_d(const Grid2D& grid, const XiField& xi,
                         const ThicknessProfile& thick);

// Nodes with |xi0/d| >= (1 - rel_tol) max are grouped by single linkage
// within cluster_radius; cluster_radius <= 0 selects 4h.
// Throws Error(kEmptyLambda) when max|xi0/d| < 1e-14.
LambdaSet find_lambda_set(const Grid2D& grid, const XiField& xi,
                          const ThicknessProfile& thick, double cluster_radius = 0.0,
                          double rel_tol = 1e-2);

// Leading-order lower critical field ln(kappa) / (2 max|xi0/d|); the O(1)
// correction is not estimated.
double critical_field(const Grid2D& grid, const XiField& xi,
                      const ThicknessProfile& thick, double kappa);
double critical_field_from_max(double max_abs, double kappa);

}  // namespace tfgl
