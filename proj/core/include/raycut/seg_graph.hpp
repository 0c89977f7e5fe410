#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "raycut/ray_grid.hpp"
#include "raycut/sphere_template.hpp"
#include "raycut/volume.hpp"

namespace raycut {

/// Per-node costs on the ray lattice, ray-major like RayGrid. `c[r*Z+z]` is
/// the cost of placing the boundary of ray r at node z.
struct CostGrid {
  double mu = 0.0;
  int rays = 0;
  int samples = 0;
  std::vector<double> c;

  double at(int r, int z) const {
    return c[static_cast<std::size_t>(r) * static_cast<std::size_t>(samples) +
             static_cast<std::size_t>(z)];
  }
};

/// Mean intensity over a window^3 neighbourhood centred on `seed`, clipped
/// to the image. `window` must be odd.
double estimate_mean(const Volume& vol, const Index3& seed, int window = 3);

/// c = |I - mu| for every ray sample.
CostGrid compute_costs(const RayGrid& rays, double mu);

/// Region form of the intensity cost: C[r][b] = sum_{z<=b} (c[r][z] - threshold).
/// Minimising C over b keeps every node whose intensity cost is below the
/// threshold and stops where the object ends. Values may be negative.
CostGrid region_costs(const CostGrid& intensity_costs, double threshold);

/// Two-class Otsu threshold over all values of a cost grid.
double otsu_threshold(const std::vector<double>& values, int bins = 256);

enum class ArcKind : std::uint8_t { kRayZ, kRayR, kTerminal, kBase };

struct GraphArc {
  int from = 0;
  int to = 0;
  double capacity = 0.0;
  ArcKind kind = ArcKind::kTerminal;
  friend bool operator==(const GraphArc&, const GraphArc&) = default;
};

/// s-t network over the ray lattice. Node id(r,z) = r*Z + z; the source is
/// R*Z and the sink R*Z + 1. Arcs are stored in construction order: all
/// intra-ray arcs, then inter-ray arcs, then terminal arcs, then the
/// infinite source arcs pinning z = 0.
struct SegGraph {
  int rays = 0;
  int samples = 0;
  int delta_r = 0;
  double inf_cap = 0.0;
  std::vector<GraphArc> arcs;
  std::vector<double> weights;  // terminal weight w per node

  int node_count() const { return rays * samples + 2; }
  int source() const { return rays * samples; }
  int sink() const { return rays * samples + 1; }
  int node(int r, int z) const { return r * samples + z; }
};

/// Terminal weights: w(r,0) = c(r,0), w(r,z) = c(r,z) - c(r,z-1).
std::vector<double> terminal_weights(const CostGrid& costs);

SegGraph build_graph(const CostGrid& costs, const SphereTemplate& tmpl, int delta_r);

}  // namespace raycut
