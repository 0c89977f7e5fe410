#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "raycut/vec3.hpp"

namespace raycut {

enum class ScalarKind { kUInt8, kInt16, kUInt16, kInt32, kFloat32, kFloat64 };

std::size_t scalar_size(ScalarKind kind);

struct Index3 {
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::int64_t k = 0;
  friend bool operator==(const Index3&, const Index3&) = default;
};

/// Axis-aligned voxel lattice. Voxel (0,0,0) is centered at `origin`; the
/// centre of voxel (i,j,k) is origin + (i*sx, j*sy, k*sz).
struct Geometry {
  std::array<std::size_t, 3> dims{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{};

  std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }
  std::size_t linear_index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims[0] * (j + dims[1] * k);
  }
  bool contains(const Index3& v) const;
  /// Same dims, spacing and origin within `tol` (absolute, mm).
  bool matches(const Geometry& other, double tol = 1e-6) const;
  /// Throws kInvalidArgument unless dims >= 1 and spacing > 0 (finite).
  void validate() const;
};

Vec3 world_to_index(const Geometry& g, const Vec3& world_mm);
Vec3 index_to_world(const Geometry& g, const Vec3& index);
inline Vec3 index_to_world(const Geometry& g, const Index3& v) {
  return index_to_world(g, Vec3{double(v.i), double(v.j), double(v.k)});
}
/// Voxel whose centre is closest to `world_mm` (not clamped).
Index3 nearest_voxel(const Geometry& g, const Vec3& world_mm);
/// True when the point lies strictly inside the union of voxel cells.
bool inside_bounds(const Geometry& g, const Vec3& world_mm);
double voxel_volume_mm3(const Geometry& g);

/// Scalar image, immutable after construction. Intensities are held in
/// float64 regardless of the on-disk scalar kind.
class Volume {
 public:
  Volume() = default;
  Volume(Geometry geometry, std::vector<double> data,
         ScalarKind kind = ScalarKind::kFloat64);

  const Geometry& geometry() const { return geometry_; }
  const std::array<std::size_t, 3>& dims() const { return geometry_.dims; }
  const Vec3& spacing() const { return geometry_.spacing; }
  const Vec3& origin() const { return geometry_.origin; }
  ScalarKind scalar_kind() const { return kind_; }
  const std::vector<double>& data() const { return data_; }

  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[geometry_.linear_index(i, j, k)];
  }
  std::pair<double, double> intensity_range() const;

 private:
  Geometry geometry_;
  std::vector<double> data_;
  ScalarKind kind_ = ScalarKind::kFloat64;
};

/// Binary mask sharing the geometry of the image it was derived from.
class MaskVolume {
 public:
  MaskVolume() = default;
  explicit MaskVolume(Geometry geometry);
  MaskVolume(Geometry geometry, std::vector<std::uint8_t> data);

  const Geometry& geometry() const { return geometry_; }
  const std::array<std::size_t, 3>& dims() const { return geometry_.dims; }
  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  std::uint8_t at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[geometry_.linear_index(i, j, k)];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, std::uint8_t v) {
    data_[geometry_.linear_index(i, j, k)] = v;
  }
  std::size_t count() const;

 private:
  Geometry geometry_;
  std::vector<std::uint8_t> data_;
};

/// Trilinear interpolation between the eight surrounding voxel centres.
/// Continuous indices are clamped to the lattice hull first, so points
/// outside the image take the value of the nearest border voxel.
double sample_trilinear(const Volume& vol, const Vec3& world_mm);

}  // namespace raycut
