#include "raycut/phantom.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "raycut/error.hpp"

namespace raycut {

std::optional<PhantomKind> parse_phantom_kind(std::string_view name) {
  if (name == "sphere") return PhantomKind::kSphere;
  if (name == "ellipsoid") return PhantomKind::kEllipsoid;
  if (name == "shifted") return PhantomKind::kShifted;
  return std::nullopt;
}

PhantomSpec PhantomSpec::defaults(PhantomKind kind) {
  PhantomSpec s;
  s.kind = kind;
  switch (kind) {
    case PhantomKind::kSphere:
      break;
    case PhantomKind::kEllipsoid:
      s.semi_axes_mm = {25.0, 20.0, 15.0};
      break;
    case PhantomKind::kShifted:
      s.offset_mm = {6.0, -4.0, 3.0};
      break;
  }
  return s;
}

double ellipsoid_volume_mm3(const Vec3& a) {
  return 4.0 / 3.0 * std::numbers::pi * a.x * a.y * a.z;
}

Phantom make_phantom(const PhantomSpec& spec) {
  Geometry g;
  g.dims = spec.dims;
  g.spacing = spec.spacing;
  g.validate();
  for (int a = 0; a < 3; ++a) {
    if (!(spec.semi_axes_mm[a] > 0.0)) {
      throw Error(Errc::kInvalidArgument, "phantom semi-axes must be positive");
    }
  }
  if (spec.noise_sigma < 0.0) throw Error(Errc::kInvalidArgument, "noise sigma must be >= 0");

  Vec3 center;
  for (int a = 0; a < 3; ++a) {
    center[a] = g.origin[a] + 0.5 * static_cast<double>(g.dims[a] - 1) * g.spacing[a] +
                spec.offset_mm[a];
  }

  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);

  std::vector<double> data(g.voxel_count());
  std::vector<std::uint8_t> truth(g.voxel_count());
  for (std::size_t k = 0; k < g.dims[2]; ++k) {
    for (std::size_t j = 0; j < g.dims[1]; ++j) {
      for (std::size_t i = 0; i < g.dims[0]; ++i) {
        const Vec3 p = index_to_world(g, Vec3{double(i), double(j), double(k)}) - center;
        const double q = (p.x * p.x) / (spec.semi_axes_mm.x * spec.semi_axes_mm.x) +
                         (p.y * p.y) / (spec.semi_axes_mm.y * spec.semi_axes_mm.y) +
                         (p.z * p.z) / (spec.semi_axes_mm.z * spec.semi_axes_mm.z);
        const bool in = q <= 1.0;
        const std::size_t idx = g.linear_index(i, j, k);
        truth[idx] = in ? 1 : 0;
        double v = in ? spec.inside : spec.outside;
        if (spec.noise_sigma > 0.0) v += noise(rng);
        // Stored as float32 so in-memory and on-disk phantoms agree exactly.
        data[idx] = static_cast<double>(static_cast<float>(v));
      }
    }
  }
  return {Volume(g, std::move(data), ScalarKind::kFloat32), MaskVolume(g, std::move(truth)),
          center};
}

}  // namespace raycut
