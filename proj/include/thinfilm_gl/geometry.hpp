#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thinfilm_gl/field_spec.hpp"
#include "thinfilm_gl/vec2.hpp"

namespace tfgl {

// Planar domain omega. Only disks are built in; multiply connected domains
// are not supported.
struct DiskDomain {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;

  bool contains(Vec2 p) const;
  double distance_to_boundary(Vec2 p) const;
  // Fraction t in (0, 1] such that from + t (to - from) lies on the circle.
  // Requires `from` inside and `to` outside.
  double boundary_fraction(Vec2 from, Vec2 to) const;
};

// Uniform Cartesian lattice with a stair-step interior mask. Nodes are stored
// row-major (i fastest): node id = j * nx + i.
class Grid2D {
 public:
  Grid2D(int nx, int ny, double hx, double hy, Vec2 origin, DiskDomain domain);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  Vec2 origin() const { return origin_; }
  const DiskDomain& domain() const { return domain_; }
  double cell_area() const { return hx_ * hy_; }

  std::size_t num_nodes() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t node_id(int i, int j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  int node_i(std::size_t id) const { return static_cast<int>(id % nx_); }
  int node_j(std::size_t id) const { return static_cast<int>(id / nx_); }
  Vec2 position(int i, int j) const {
    return {origin_.x + i * hx_, origin_.y + j * hy_};
  }
  Vec2 position(std::size_t id) const { return position(node_i(id), node_j(id)); }

  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  bool interior(int i, int j) const {
    return in_range(i, j) && mask_[node_id(i, j)];
  }
  bool interior(std::size_t id) const { return mask_[id]; }

  // Interior node ids in row-major order, and the inverse map (-1 outside).
  std::span<const std::size_t> interior_nodes() const { return interior_; }
  std::size_t num_interior() const { return interior_.size(); }
  long interior_index(std::size_t id) const { return dense_[id]; }

  // Interior nodes with at least one exterior 4-neighbour.
  bool in_boundary_band(std::size_t id) const { return band_[id]; }
  std::size_t boundary_band_size() const;

  // Distance from the node to the analytic boundary of omega.
  double distance_to_boundary(std::size_t id) const {
    return domain_.distance_to_boundary(position(id));
  }

  bool same_layout(const Grid2D& other) const;
  std::string describe() const;

 private:
  int nx_, ny_;
  double hx_, hy_;
  Vec2 origin_;
  DiskDomain domain_;
  std::vector<char> mask_;
  std::vector<char> band_;
  std::vector<std::size_t> interior_;
  std::vector<long> dense_;
};

Grid2D build_disk_domain(double radius, int n);

// Film heights sampled at node centres. Values at exterior nodes are zero.
struct ThicknessProfile {
  std::vector<double> f, g, d, m;
  // Analytic gradient of the centroid m = (f+g)/2 at every node (zero
  // outside the mask); present when both specs are differentiable.
  std::optional<std::vector<Vec2>> grad_m;
  // Pointwise evaluator for m, used to sample it off the nodes.
  std::shared_ptr<const FieldSpec> f_spec, g_spec;

  double centroid_at(Vec2 p) const;
  double min_interior_d(const Grid2D& grid) const;
  double max_interior_d(const Grid2D& grid) const;
};

ThicknessProfile build_thickness(const Grid2D& grid, const FieldSpec& f,
                                 const FieldSpec& g);

// Integral of d over omega with node-cell quadrature.
double film_volume(const Grid2D& grid, const ThicknessProfile& thick);

std::string grid_header_json(const Grid2D& grid);
void write_grid_csv(const std::string& path, const Grid2D& grid,
                    const ThicknessProfile& thick);

}  // namespace tfgl
