#pragma once

#include <vector>

#include "thinfilm_gl/vec2.hpp"

namespace tfgl {

// Dirichlet Green's function of the unit disk, positive inside:
// G(x, y) = (1/2pi) ln( sqrt(1 - 2 x.y + |x|^2 |y|^2) / |x - y| ).
// Throws kSingularEvaluation for x == y and kOutOfDomain outside the disk.
double green_disk(Vec2 x, Vec2 y);

// Polyline inside the unit disk; cell k joins vertex k to vertex k+1 (and
// the last vertex to the first when closed).
class Curve {
 public:
  Curve(std::vector<Vec2> vertices, bool closed);
  static Curve circle(Vec2 center, double radius, int cells);

  std::size_t num_cells() const { return mid_.size(); }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  Vec2 cell_start(std::size_t k) const { return vertices_[k]; }
  Vec2 cell_end(std::size_t k) const { return vertices_[(k + 1) % vertices_.size()]; }
  Vec2 midpoint(std::size_t k) const { return mid_[k]; }
  double length(std::size_t k) const { return len_[k]; }
  // Index distance between cells, cyclic for closed curves.
  std::size_t cell_distance(std::size_t a, std::size_t b) const;

 private:
  std::vector<Vec2> vertices_;
  bool closed_;
  std::vector<Vec2> mid_;
  std::vector<double> len_;
};

// Probability weights per cell.
struct DiscreteMeasure {
  std::vector<double> weights;
  static DiscreteMeasure uniform(std::size_t n);
  void validate(std::size_t cells) const;
};

// Cell-averaged kernel K_ij = mean of G over cell i x cell j. Off-diagonal
// entries use a Gauss product rule (16 points per cell for nearby cells,
// 2 otherwise). The diagonal uses the exact mean of -(1/2pi) ln|s - t| over
// a straight cell of length l, which is -(1/2pi)(ln l - 3/2), plus the
// smooth image part at the midpoint.
std::vector<double> kernel_matrix(const Curve& curve);

// I(mu) = 1/2 sum_ij w_i w_j K_ij.
double measure_energy(const DiscreteMeasure& mu, const Curve& curve);
double measure_energy(const DiscreteMeasure& mu, const std::vector<double>& kernel);

struct MeasureOptions {
  int max_iters = 200000;
  double tol = 1e-9;  // KKT residual, max-norm of the projected-gradient map
};

struct MeasureResult {
  DiscreteMeasure measure;
  double energy = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(const std::vector<double>& x);

// Projected gradient descent with step 1/L, L the largest kernel eigenvalue
// (power iteration); monotone in I. Non-convergence is reported, not thrown.
MeasureResult minimize_measure(const Curve& curve, const DiscreteMeasure& init,
                               const MeasureOptions& opts = {});

struct VortexDensity {
  std::vector<double> count;    // predicted vortices per cell
  std::vector<double> density;  // per unit arclength
  double total = 0.0;
};

// beta * (xi_max / (2 I*)) * mu, per cell and per unit length.
VortexDensity vortex_count_scaling(double beta, const DiscreteMeasure& mu,
                                   const Curve& curve, double xi_max, double i_star);

}  // namespace tfgl
