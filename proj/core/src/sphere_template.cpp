#include "raycut/sphere_template.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "raycut/error.hpp"

namespace raycut {

std::size_t SphereTemplate::edge_count() const {
  std::size_t twice = 0;
  for (const auto& n : neighbors) twice += n.size();
  return twice / 2;
}

std::vector<std::vector<int>> triangle_adjacency(std::size_t vertex_count,
                                                 const std::vector<Triangle>& triangles) {
  std::vector<std::vector<int>> adj(vertex_count);
  for (const auto& t : triangles) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a != b) adj[t[a]].push_back(t[b]);
      }
    }
  }
  for (auto& n : adj) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return adj;
}

SphereTemplate build_icosphere(int subdiv) {
  if (subdiv < 0 || subdiv > kMaxSubdivision) {
    throw Error(Errc::kSubdivTooLarge, "icosphere subdivision must be in [0, " +
                                           std::to_string(kMaxSubdivision) + "], got " +
                                           std::to_string(subdiv));
  }
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& p : v) p = normalized(p);
  std::vector<Triangle> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };

  for (int level = 0; level < subdiv; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(v.size());
      v.push_back(normalized(v[a] + v[b]));
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const auto& t : f) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }

  SphereTemplate tmpl;
  tmpl.neighbors = triangle_adjacency(v.size(), f);
  tmpl.directions = std::move(v);
  tmpl.triangles = std::move(f);
  return tmpl;
}

}  // namespace raycut
