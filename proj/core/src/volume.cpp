#include "raycut/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "raycut/error.hpp"

namespace raycut {

std::size_t scalar_size(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::kUInt8: return 1;
    case ScalarKind::kInt16:
    case ScalarKind::kUInt16: return 2;
    case ScalarKind::kInt32:
    case ScalarKind::kFloat32: return 4;
    case ScalarKind::kFloat64: return 8;
  }
  return 0;
}

bool Geometry::contains(const Index3& v) const {
  return v.i >= 0 && v.j >= 0 && v.k >= 0 &&
         v.i < static_cast<std::int64_t>(dims[0]) &&
         v.j < static_cast<std::int64_t>(dims[1]) &&
         v.k < static_cast<std::int64_t>(dims[2]);
}

bool Geometry::matches(const Geometry& other, double tol) const {
  if (dims != other.dims) return false;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(spacing[a] - other.spacing[a]) > tol) return false;
    if (std::abs(origin[a] - other.origin[a]) > tol) return false;
  }
  return true;
}

void Geometry::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 1) {
      throw Error(Errc::kInvalidArgument, "volume dimensions must be >= 1");
    }
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
      throw Error(Errc::kInvalidArgument, "voxel spacing must be positive");
    }
    if (!std::isfinite(origin[a])) {
      throw Error(Errc::kInvalidArgument, "volume origin must be finite");
    }
  }
}

Vec3 world_to_index(const Geometry& g, const Vec3& world_mm) {
  return {(world_mm.x - g.origin.x) / g.spacing.x,
          (world_mm.y - g.origin.y) / g.spacing.y,
          (world_mm.z - g.origin.z) / g.spacing.z};
}

Vec3 index_to_world(const Geometry& g, const Vec3& index) {
  return {g.origin.x + index.x * g.spacing.x, g.origin.y + index.y * g.spacing.y,
          g.origin.z + index.z * g.spacing.z};
}

Index3 nearest_voxel(const Geometry& g, const Vec3& world_mm) {
  const Vec3 u = world_to_index(g, world_mm);
  return {static_cast<std::int64_t>(std::floor(u.x + 0.5)),
          static_cast<std::int64_t>(std::floor(u.y + 0.5)),
          static_cast<std::int64_t>(std::floor(u.z + 0.5))};
}

bool inside_bounds(const Geometry& g, const Vec3& world_mm) {
  const Vec3 u = world_to_index(g, world_mm);
  for (int a = 0; a < 3; ++a) {
    if (!(u[a] > -0.5 && u[a] < static_cast<double>(g.dims[a]) - 0.5)) return false;
  }
  return true;
}

double voxel_volume_mm3(const Geometry& g) {
  return g.spacing.x * g.spacing.y * g.spacing.z;
}

Volume::Volume(Geometry geometry, std::vector<double> data, ScalarKind kind)
    : geometry_(geometry), data_(std::move(data)), kind_(kind) {
  geometry_.validate();
  if (data_.size() != geometry_.voxel_count()) {
    throw Error(Errc::kSizeMismatch,
                "volume data holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(geometry_.voxel_count()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw Error(Errc::kInvalidArgument, "volume contains non-finite intensities");
    }
  }
}

std::pair<double, double> Volume::intensity_range() const {
  if (data_.empty()) return {0.0, 0.0};
  const auto [lo, hi] = std::minmax_element(data_.begin(), data_.end());
  return {*lo, *hi};
}

MaskVolume::MaskVolume(Geometry geometry)
    : geometry_(geometry), data_(geometry.voxel_count(), 0) {
  geometry_.validate();
}

MaskVolume::MaskVolume(Geometry geometry, std::vector<std::uint8_t> data)
    : geometry_(geometry), data_(std::move(data)) {
  geometry_.validate();
  if (data_.size() != geometry_.voxel_count()) {
    throw Error(Errc::kSizeMismatch, "mask data length does not match its geometry");
  }
  for (auto v : data_) {
    if (v > 1) throw Error(Errc::kInvalidArgument, "mask values must be 0 or 1");
  }
}

std::size_t MaskVolume::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

namespace {

// Lower lattice index and fractional offset along one axis after clamping
// the continuous index to [0, n-1]. Indices within 1e-9 of a lattice point
// snap to it so that voxel centres reproduce the stored value exactly.
inline void axis_cell(double u, std::size_t n, std::size_t& i0, double& t) {
  if (n == 1) {
    i0 = 0;
    t = 0.0;
    return;
  }
  const double hi = static_cast<double>(n - 1);
  u = std::clamp(u, 0.0, hi);
  if (const double r = std::round(u); std::abs(u - r) < 1e-9) u = r;
  auto fl = static_cast<std::size_t>(std::floor(u));
  if (fl >= n - 1) fl = n - 2;
  i0 = fl;
  t = u - static_cast<double>(fl);
}

}  // namespace

double sample_trilinear(const Volume& vol, const Vec3& world_mm) {
  const Geometry& g = vol.geometry();
  const Vec3 u = world_to_index(g, world_mm);
  std::size_t i0, j0, k0;
  double tx, ty, tz;
  axis_cell(u.x, g.dims[0], i0, tx);
  axis_cell(u.y, g.dims[1], j0, ty);
  axis_cell(u.z, g.dims[2], k0, tz);
  const std::size_t i1 = g.dims[0] > 1 ? i0 + 1 : i0;
  const std::size_t j1 = g.dims[1] > 1 ? j0 + 1 : j0;
  const std::size_t k1 = g.dims[2] > 1 ? k0 + 1 : k0;

  const double c000 = vol.at(i0, j0, k0), c100 = vol.at(i1, j0, k0);
  const double c010 = vol.at(i0, j1, k0), c110 = vol.at(i1, j1, k0);
  const double c001 = vol.at(i0, j0, k1), c101 = vol.at(i1, j0, k1);
  const double c011 = vol.at(i0, j1, k1), c111 = vol.at(i1, j1, k1);

  auto lerp = [](double a, double b, double t) { return (1.0 - t) * a + t * b; };
  const double c00 = lerp(c000, c100, tx);
  const double c10 = lerp(c010, c110, tx);
  const double c01 = lerp(c001, c101, tx);
  const double c11 = lerp(c011, c111, tx);
  return lerp(lerp(c00, c10, ty), lerp(c01, c11, ty), tz);
}

}  // namespace raycut
