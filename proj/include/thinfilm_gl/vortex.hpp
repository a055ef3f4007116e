#pragma once

#include <vector>

#include "thinfilm_gl/gl2d.hpp"
#include "thinfilm_gl/xi_solver.hpp"

namespace tfgl {

struct Vortex {
  Vec2 position;
  int degree = 0;
  std::size_t plaquettes = 1;  // number of merged plaquettes
};

struct VortexSet {
  std::vector<Vortex> vortices;
  int total_degree = 0;
  // Plaquettes evaluated although a corner had |v| <= min_modulus * gamma.
  std::size_t low_modulus_plaquettes = 0;
};

// Plaquette windings from the gauge-invariant edge products
// v_head conj(U v_tail): degree = round((sum of principal arguments + flux
// through the plaquette) / 2 pi). Same-sign plaquettes within 2h are merged
// into one vortex at the centroid weighted by 1/|v| (the deepest core
// dominates). `gammas` (per node, may be empty for gamma = 1) scales the
// low-modulus threshold. Throws Error(kDegeneratePlaquette) if a corner of
// an evaluated plaquette has v == 0 exactly.
VortexSet detect_vortices(const Grid2D& grid, const OrderParameterField& field,
                          double min_modulus = 1e-3,
                          const std::vector<double>& gammas = {});

// Winding number of v along the outer boundary of the union of complete
// plaquettes, counter-clockwise, computed by tracing that contour directly.
int contour_winding(const Grid2D& grid, const OrderParameterField& field);

struct LambdaMatch {
  Vec2 position;
  int predicted_sign = 0;
  int count = 0;       // vortices within the radius
  int degree_sum = 0;  // signed sum of their degrees
  bool sign_mismatch = false;  // some nearby vortex has the opposite sign
};

struct MatchReport {
  std::vector<LambdaMatch> points;
  std::vector<Vortex> unmatched;
  // Every Lambda point has a nearby vortex and none of opposite sign.
  bool all_matched = false;
};

MatchReport match_predictions(const VortexSet& found, const LambdaSet& predicted,
                              double radius);

}  // namespace tfgl
