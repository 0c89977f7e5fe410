#include "raycut/ray_grid.hpp"

#include <cmath>

#include "raycut/error.hpp"

namespace raycut {

RayGrid sample_rays(const Volume& vol, const Vec3& seed_mm, const SphereTemplate& tmpl,
                    int samples, double max_radius_mm) {
  if (samples < 2) throw Error(Errc::kInvalidArgument, "at least 2 samples per ray required");
  if (!(max_radius_mm > 0.0) || !std::isfinite(max_radius_mm)) {
    throw Error(Errc::kInvalidArgument, "max radius must be positive");
  }
  if (!inside_bounds(vol.geometry(), seed_mm)) {
    throw Error(Errc::kSeedOutsideVolume, "seed outside volume");
  }

  RayGrid grid;
  grid.seed = seed_mm;
  grid.rays = static_cast<int>(tmpl.ray_count());
  grid.samples = samples;
  grid.delta_mm = max_radius_mm / samples;
  const std::size_t n = tmpl.ray_count() * static_cast<std::size_t>(samples);
  grid.positions.resize(n);
  grid.intensities.resize(n);
  for (int r = 0; r < grid.rays; ++r) {
    const Vec3& dir = tmpl.directions[r];
    for (int z = 0; z < samples; ++z) {
      const std::size_t idx = grid.index(r, z);
      grid.positions[idx] = seed_mm + dir * grid.radius(z);
      grid.intensities[idx] = sample_trilinear(vol, grid.positions[idx]);
    }
  }
  return grid;
}

}  // namespace raycut
