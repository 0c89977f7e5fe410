#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "raycut/ray_grid.hpp"
#include "raycut/sphere_template.hpp"
#include "raycut/volume.hpp"

namespace raycut {

/// Closed triangle mesh of a segmentation: vertex r is node (r, b_r).
/// Star-shaped about `seed` by construction.
struct SegMesh {
  Vec3 seed;
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

SegMesh extract_mesh(std::span<const int> boundary, const RayGrid& rays,
                     const SphereTemplate& tmpl);

enum class ScanDirection { kPositiveX, kNegativeX };

/// Labels every voxel centre inside the mesh by crossing parity along x.
/// The voxel containing the seed is always set.
MaskVolume voxelize(const SegMesh& mesh, const Geometry& geometry,
                    ScanDirection direction = ScanDirection::kPositiveX);

/// Wavefront OBJ: "v x y z" lines then 1-based "f a b c" lines.
void export_obj(const SegMesh& mesh, const std::filesystem::path& path);

}  // namespace raycut
