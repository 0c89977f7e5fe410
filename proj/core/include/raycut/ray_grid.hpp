#pragma once

#include <cstddef>
#include <vector>

#include "raycut/sphere_template.hpp"
#include "raycut/vec3.hpp"
#include "raycut/volume.hpp"

namespace raycut {

/// R rays x Z samples, stored ray-major: element (r, z) lives at r*Z + z.
/// Node z sits at radius (z+1)*delta_mm, so no node coincides with the seed.
struct RayGrid {
  Vec3 seed;
  int rays = 0;
  int samples = 0;
  double delta_mm = 0.0;
  std::vector<Vec3> positions;
  std::vector<double> intensities;

  std::size_t index(int r, int z) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(samples) +
           static_cast<std::size_t>(z);
  }
  const Vec3& position(int r, int z) const { return positions[index(r, z)]; }
  double intensity(int r, int z) const { return intensities[index(r, z)]; }
  double radius(int z) const { return (z + 1) * delta_mm; }
};

RayGrid sample_rays(const Volume& vol, const Vec3& seed_mm, const SphereTemplate& tmpl,
                    int samples, double max_radius_mm);

}  // namespace raycut
