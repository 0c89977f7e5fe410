#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "raycut/volume.hpp"

namespace raycut {

enum class PhantomKind { kSphere, kEllipsoid, kShifted };

std::optional<PhantomKind> parse_phantom_kind(std::string_view name);

/// Synthetic test object: a solid ellipsoid of constant intensity on a
/// constant background, plus optional Gaussian noise from a seeded RNG.
/// The object is centred at the physical centre of the grid plus `offset_mm`.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::kSphere;
  std::array<std::size_t, 3> dims{101, 101, 101};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 semi_axes_mm{20.0, 20.0, 20.0};
  Vec3 offset_mm{};
  double inside = 200.0;
  double outside = 50.0;
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;

  /// Defaults for each kind: sphere r=20, ellipsoid (25,20,15), and a
  /// sphere of r=20 displaced by (6,-4,3) mm for off-centre seeds.
  static PhantomSpec defaults(PhantomKind kind);
};

struct Phantom {
  Volume image;      // float32 scalar kind
  MaskVolume truth;  // voxel centres inside the ellipsoid
  Vec3 center_mm;
};

Phantom make_phantom(const PhantomSpec& spec);

/// (4/3) pi a b c
double ellipsoid_volume_mm3(const Vec3& semi_axes_mm);

}  // namespace raycut
