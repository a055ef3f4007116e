#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "thinfilm_gl/field_model.hpp"
#include "thinfilm_gl/geometry.hpp"

namespace tfgl {

using cplx = std::complex<double>;

// Oriented lattice edge between two interior nodes; tail is the lower node.
struct Edge {
  std::size_t tail, head;
  bool horizontal;
};

// Edges joining interior nodes, in row-major order of the tail with the
// x-edge before the y-edge.
std::vector<Edge> interior_edges(const Grid2D& grid);

// Complex order parameter on interior nodes plus link angles theta_e, one per
// interior edge. The link variable is U_e = exp(i theta_e) and the covariant
// difference along e is v_head - U_e v_tail.
struct OrderParameterField {
  std::vector<cplx> v;        // per node, zero outside the mask
  std::vector<double> theta;  // per interior edge
};

// theta_e = lambda * integral of A0 from tail to head, midpoint rule.
std::vector<double> link_angles(const Grid2D& grid, const EffectivePotential& pot,
                                double lambda);

OrderParameterField make_field(const Grid2D& grid, const EffectivePotential& pot,
                               double lambda, std::vector<cplx> v);

enum class GammaMode { kOne, kCritical };

struct GLKernels;

struct EnergyBreakdown {
  double kinetic = 0.0;
  double vertical_b = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

// Discrete reduced energy
//   sum_e d_e/2 |v_h - U_e v_t|^2 (h_perp/h_par)
//   + sum_nodes d kappa^2/4 (|v|^2 - gamma^2)^2 h^2  [+ sum d |b|^2 h^2 / 2]
// with d_e the arithmetic mean of the endpoint thicknesses. gamma is 1 or
// the pointwise suppression factor for the given squared in-plane field.
class GLModel {
 public:
  GLModel(const Grid2D& grid, const ThicknessProfile& thick, double kappa,
          GammaMode mode = GammaMode::kOne, double h_par_sq = 0.0);

  const Grid2D& grid() const { return *grid_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double kappa() const { return kappa_; }
  double gamma(std::size_t id) const { return gamma_[id]; }
  const std::vector<double>& gammas() const { return gamma_; }
  const std::vector<double>& edge_weights() const { return edge_weight_; }

  EnergyBreakdown energy(const OrderParameterField& field,
                         const std::vector<cplx>* b = nullptr) const;
  // (dE/dRe v + i dE/dIm v) / cell area, zero outside the mask.
  std::vector<cplx> gradient(const OrderParameterField& field) const;
  // Energy along v + t p as a quartic c0 + c1 t + ... + c4 t^4.
  std::array<double, 5> line_polynomial(const OrderParameterField& field,
                                        const std::vector<cplx>& p) const;

  void check(const OrderParameterField& field) const;

 private:
  friend struct GLKernels;

  const Grid2D* grid_;
  const ThicknessProfile* thick_;
  double kappa_;
  std::vector<Edge> edges_;
  std::vector<double> edge_weight_;  // d_e * h_perp / h_par
  std::vector<double> gamma_;
};

EnergyBreakdown discrete_energy(const Grid2D& grid, const OrderParameterField& field,
                                const ThicknessProfile& thick, double kappa,
                                GammaMode mode, double h_par_sq = 0.0,
                                const std::vector<cplx>* b = nullptr);

std::vector<cplx> energy_gradient(const Grid2D& grid, const OrderParameterField& field,
                                  const ThicknessProfile& thick, double kappa,
                                  GammaMode mode, double h_par_sq = 0.0);

// v <- v e^{i eta}, theta_e <- theta_e + eta_head - eta_tail.
OrderParameterField gauge_transform(const Grid2D& grid, const OrderParameterField& field,
                                    const std::vector<double>& eta);

// Gauge eta minimising sum_e d_e (theta_e + eta_h - eta_t)^2 (a discrete
// Coulomb gauge), normalised to zero mean.
std::vector<double> coulomb_gauge(const GLModel& model, const std::vector<double>& theta);

// Deterministic seeded start v = gamma (1 + 0.1 noise) e^{-i eta}, with
// noise uniform in the unit square [-1,1]^2 and eta the Coulomb gauge of
// the links, so the start carries no spurious phase winding.
OrderParameterField initial_field(const GLModel& model, std::vector<double> theta,
                                  std::uint64_t seed);

struct MinimizeOptions {
  int max_iters = 20000;
  double grad_tol = 1e-8;
  int restart_every = 200;
};

struct MinimizeResult {
  OrderParameterField field;
  EnergyBreakdown energy;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;  // max-norm of the area-scaled gradient
};

// Nonlinear conjugate gradient (Polak-Ribiere+, periodic restarts). The
// trial step is the exact minimiser of the quartic line polynomial, then
// Armijo backtracking guards monotone decrease. Non-convergence is reported
// in the result, not thrown.
MinimizeResult minimize(const GLModel& model, OrderParameterField init,
                        const MinimizeOptions& opts = {});

// J = G - (lambda^2 / 2) sum |A0|^2 h^2; requires d == 1 (kInvalidHypothesis).
double renormalized_energy(const GLModel& model, const OrderParameterField& field,
                           const EffectivePotential& pot, const ThicknessProfile& thick,
                           double lambda);

}  // namespace tfgl
