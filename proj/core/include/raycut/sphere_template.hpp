#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "raycut/vec3.hpp"

namespace raycut {

using Triangle = std::array<int, 3>;

/// Triangulated unit sphere. Each vertex is one ray direction; two rays are
/// neighbours when they share a triangle.
struct SphereTemplate {
  std::vector<Vec3> directions;
  std::vector<Triangle> triangles;
  std::vector<std::vector<int>> neighbors;  // sorted, symmetric, irreflexive

  std::size_t ray_count() const { return directions.size(); }
  std::size_t edge_count() const;
};

inline constexpr int kMaxSubdivision = 6;

/// Regular icosahedron, each face split `subdiv` times into four, vertices
/// projected to the unit sphere. V = 10*4^s + 2, F = 20*4^s.
/// Triangles are wound counter-clockwise seen from outside.
SphereTemplate build_icosphere(int subdiv);

/// Rebuilds the neighbour lists from the triangle list.
std::vector<std::vector<int>> triangle_adjacency(std::size_t vertex_count,
                                                 const std::vector<Triangle>& triangles);

}  // namespace raycut
