#pragma once

#include <vector>

#include "thinfilm_gl/field_model.hpp"
#include "thinfilm_gl/gl2d.hpp"

namespace tfgl {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int n);

// Centred differences where both neighbours are interior, one-sided at the
// mask edge; zero outside the mask.
struct ComplexGradient {
  std::vector<cplx> dx, dy;
};
ComplexGradient nodal_gradient(const Grid2D& grid, const std::vector<cplx>& f);

// A recovery configuration on the rescaled slab
// {f(x') < x3 < g(x')}: u = exp(i s A3(x') x3) (v + eps b x3) with A equal
// to the applied potential, so the field-energy integral is exactly zero.
// s = eps * rho(eps) is the coupling of the in-plane field (1 in the
// critical regime, where the constant L is folded into lambda).
struct SlabConfig3D {
  const Grid2D* grid = nullptr;
  const ThicknessProfile* thick = nullptr;
  int nz = 8;
  double epsilon = 0.1;
  Regime regime = Regime::kCritical;
  double coupling = 1.0;
  std::vector<cplx> v, b;  // empty for the supercritical normal state
};

SlabConfig3D recovery_critical(const Grid2D& grid, const ThicknessProfile& thick,
                               std::vector<cplx> v, std::vector<cplx> b, double eps,
                               int nz = 8);
// Restricted family with Cosserat field c' = rho h' (see limit_energy).
SlabConfig3D recovery_subcritical(const Grid2D& grid, const ThicknessProfile& thick,
                                  std::vector<cplx> v, std::vector<cplx> b, double eps,
                                  const RegimeSpec& spec, int nz = 8);
// u = 0 with A the applied potential.
SlabConfig3D recovery_supercritical(const Grid2D& grid, const ThicknessProfile& thick,
                                    double eps, int nz = 8);

// u at the node `id` and height x3, from the closed form.
cplx recovery_order_parameter(const SlabConfig3D& cfg, const AppliedField& field,
                              std::size_t id, double x3);
// eps^-1 (d/dx3 - i A3) u from the closed form, which reduces to
// b exp(i s A3 x3).
cplx recovery_vertical_derivative(const SlabConfig3D& cfg, const AppliedField& field,
                                  std::size_t id, double x3);

struct Energy3D {
  double horizontal = 0.0;
  double vertical = 0.0;
  double potential = 0.0;
  double field = 0.0;  // analytically zero for every supported family
  double total = 0.0;
};

// Node cells in x', nz-point Gauss-Legendre over [f, g] in each column.
Energy3D evaluate_3d_energy(const SlabConfig3D& cfg, const AppliedField& field,
                            double kappa);

// Limit functionals on the same nodal discretisation:
//   critical:     I_{kappa,0}(v, b) with B' = lambda A0 and the d^2 |h'|^2 / 12 term
//   sub-finite:   I^rho_{kappa,-} with c' = rho h' (Cosserat term zero)
//   sub-infinite: I^inf_{kappa,-}
//   super:        kappa^2 / 4 |Omega|
double limit_energy(Regime regime, const Grid2D& grid, const ThicknessProfile& thick,
                    const std::vector<cplx>& v, const std::vector<cplx>& b,
                    const AppliedField& field, double kappa);

struct ConvergenceRow {
  double epsilon = 0.0;
  double energy = 0.0;
  double error = 0.0;
  double order = 0.0;  // log(e_{k-1}/e_k) / log(eps_{k-1}/eps_k); 0 on the first row
};

struct ConvergenceStudy {
  Regime regime = Regime::kCritical;
  double limit = 0.0;
  std::vector<ConvergenceRow> rows;
  double min_order = 0.0;
  // Every error below this is treated as exact (no order defined).
  double exact_tol = 0.0;
  bool exact = false;
};

// eps_ladder must be strictly decreasing with at least three entries.
ConvergenceStudy convergence_study(Regime regime, const Grid2D& grid,
                                   const ThicknessProfile& thick,
                                   const std::vector<cplx>& v, const std::vector<cplx>& b,
                                   const AppliedField& field, double kappa,
                                   const std::vector<double>& eps_ladder,
                                   const RegimeSpec& spec, int nz = 8);

}  // namespace tfgl
