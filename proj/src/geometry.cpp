#include "thinfilm_gl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "thinfilm_gl/error.hpp"
#include "thinfilm_gl/io.hpp"

namespace tfgl {

bool DiskDomain::contains(Vec2 p) const { return norm(p - center) < radius; }

double DiskDomain::distance_to_boundary(Vec2 p) const {
  return radius - norm(p - center);
}

double DiskDomain::boundary_fraction(Vec2 from, Vec2 to) const {
  const Vec2 p = from - center;
  const Vec2 dir = to - from;
  const double a = norm2(dir);
  const double b = 2.0 * dot(p, dir);
  const double c = norm2(p) - radius * radius;
  // c < 0 because `from` is inside, so the discriminant is positive and the
  // larger root is the exit point. Written in the cancellation-free form.
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  const double t = b >= 0.0 ? (-2.0 * c) / (b + disc) : (disc - b) / (2.0 * a);
  return std::clamp(t, 0.0, 1.0);
}

Grid2D::Grid2D(int nx, int ny, double hx, double hy, Vec2 origin, DiskDomain domain)
    : nx_(nx), ny_(ny), hx_(hx), hy_(hy), origin_(origin), domain_(domain) {
  require(nx >= 3 && ny >= 3, ErrorCode::kInvalidArgument,
          "grid needs at least 3 nodes per axis");
  require(hx > 0.0 && hy > 0.0, ErrorCode::kInvalidArgument,
          "grid spacing must be positive");
  mask_.assign(num_nodes(), 0);
  band_.assign(num_nodes(), 0);
  dense_.assign(num_nodes(), -1);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      mask_[node_id(i, j)] = domain_.contains(position(i, j)) ? 1 : 0;
  for (std::size_t id = 0; id < num_nodes(); ++id) {
    if (!mask_[id]) continue;
    dense_[id] = static_cast<long>(interior_.size());
    interior_.push_back(id);
    const int i = node_i(id), j = node_j(id);
    band_[id] = !(interior(i + 1, j) && interior(i - 1, j) && interior(i, j + 1) &&
                  interior(i, j - 1));
  }
}

std::size_t Grid2D::boundary_band_size() const {
  return static_cast<std::size_t>(std::count(band_.begin(), band_.end(), 1));
}

bool Grid2D::same_layout(const Grid2D& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && hx_ == o.hx_ && hy_ == o.hy_ &&
         origin_.x == o.origin_.x && origin_.y == o.origin_.y && mask_ == o.mask_;
}

std::string Grid2D::describe() const {
  std::ostringstream os;
  os << nx_ << "x" << ny_ << " grid, h=" << hx_ << ", " << num_interior()
     << " interior nodes";
  return os.str();
}

Grid2D build_disk_domain(double radius, int n) {
  require(radius > 0.0, ErrorCode::kInvalidArgument, "disk radius must be positive");
  require(n >= 3, ErrorCode::kInvalidArgument,
          "disk grid needs n >= 3 nodes per axis, got " + std::to_string(n));
  const double h = 2.0 * radius / (n - 1);
  return Grid2D(n, n, h, h, {-radius, -radius}, DiskDomain{{0.0, 0.0}, radius});
}

double ThicknessProfile::centroid_at(Vec2 p) const {
  return 0.5 * (f_spec->value(p) + g_spec->value(p));
}

double ThicknessProfile::min_interior_d(const Grid2D& grid) const {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t id : grid.interior_nodes()) lo = std::min(lo, d[id]);
  return lo;
}

double ThicknessProfile::max_interior_d(const Grid2D& grid) const {
  double hi = 0.0;
  for (std::size_t id : grid.interior_nodes()) hi = std::max(hi, d[id]);
  return hi;
}

ThicknessProfile build_thickness(const Grid2D& grid, const FieldSpec& f_spec,
                                 const FieldSpec& g_spec) {
  ThicknessProfile t;
  const std::size_t n = grid.num_nodes();
  t.f.assign(n, 0.0);
  t.g.assign(n, 0.0);
  t.d.assign(n, 0.0);
  t.m.assign(n, 0.0);
  std::vector<Vec2> grad_m(n);
  t.f_spec = std::make_shared<FieldSpec>(f_spec);
  t.g_spec = std::make_shared<FieldSpec>(g_spec);
  for (std::size_t id : grid.interior_nodes()) {
    const Vec2 p = grid.position(id);
    const FieldSpec::Sample fs = f_spec.sample(p);
    const FieldSpec::Sample gs = g_spec.sample(p);
    t.f[id] = fs.value;
    t.g[id] = gs.value;
    t.d[id] = gs.value - fs.value;
    t.m[id] = 0.5 * (fs.value + gs.value);
    grad_m[id] = 0.5 * (fs.grad + gs.grad);
    if (!(t.d[id] > 0.0)) {
      std::ostringstream os;
      os << "film thickness g - f = " << t.d[id] << " is not positive at node ("
         << grid.node_i(id) << ", " << grid.node_j(id) << ") x=(" << p.x << ", "
         << p.y << ")";
      fail(ErrorCode::kInvalidThickness, os.str());
    }
  }
  t.grad_m = std::move(grad_m);
  return t;
}

double film_volume(const Grid2D& grid, const ThicknessProfile& thick) {
  double sum = 0.0;
  for (std::size_t id : grid.interior_nodes()) sum += thick.d[id];
  return sum * grid.cell_area();
}

std::string grid_header_json(const Grid2D& grid) {
  nlohmann::ordered_json j;
  j["nx"] = grid.nx();
  j["ny"] = grid.ny();
  j["h"] = grid.hx();
  j["origin"] = {grid.origin().x, grid.origin().y};
  j["domain"] = {{"shape", "disk"},
                 {"center", {grid.domain().center.x, grid.domain().center.y}},
                 {"radius", grid.domain().radius}};
  j["interior_nodes"] = grid.num_interior();
  return j.dump();
}

void write_grid_csv(const std::string& path, const Grid2D& grid,
                    const ThicknessProfile& thick) {
  CsvWriter csv(path, {"i", "j", "x1", "x2", "mask", "f", "g", "d", "m"});
  for (std::size_t id = 0; id < grid.num_nodes(); ++id) {
    const Vec2 p = grid.position(id);
    csv.row(grid.node_i(id), grid.node_j(id), p.x, p.y, grid.interior(id) ? 1 : 0,
            thick.f[id], thick.g[id], thick.d[id], thick.m[id]);
  }
}

}  // namespace tfgl
