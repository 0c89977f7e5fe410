#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "raycut/maxflow.hpp"
#include "raycut/ray_grid.hpp"
#include "raycut/seg_graph.hpp"
#include "raycut/sphere_template.hpp"
#include "raycut/surface.hpp"
#include "raycut/volume.hpp"

namespace raycut {

/// How ray samples become boundary costs for the graph.
///  - kRegion: C[b] = sum_{z<=b} (|I - mu| - tau), tau from Otsu over all
///    intensity costs unless given. The boundary lands where the run of
///    object-like samples ends.
///  - kIntensity: C[b] = |I(b) - mu| directly.
enum class CostModel { kRegion, kIntensity };

std::optional<CostModel> parse_cost_model(std::string_view name);
std::string_view to_string(CostModel model);

struct SegParams {
  int subdiv = 3;
  int samples = 60;
  double max_radius_mm = 50.0;
  int delta_r = 1;
  int mean_window = 3;
  CostModel cost_model = CostModel::kRegion;
  std::optional<double> region_threshold;

  void validate() const;
};

/// A seed given either as voxel indices or as a world position in mm.
struct Seed {
  Vec3 value;
  bool world_mm = false;
};

struct PhaseTimings {
  double rays_ms = 0.0;
  double graph_ms = 0.0;
  double mincut_ms = 0.0;
  double voxelize_ms = 0.0;
  double total_ms = 0.0;
};

struct SegmentationResult {
  SegParams params;
  Vec3 seed_mm;
  Index3 seed_voxel;
  double mu = 0.0;
  double threshold = 0.0;  // region threshold actually used (kRegion only)
  std::size_t node_count = 0;
  std::size_t arc_count = 0;
  RayGrid rays;
  CutResult cut;
  SegMesh mesh;
  MaskVolume mask;
  PhaseTimings timings;

  double volume_mm3() const;
  int boundary_min() const;
  int boundary_max() const;
};

/// Resolves the seed to a world position; throws kSeedOutsideVolume.
Vec3 resolve_seed(const Geometry& g, const Seed& seed);

/// Full pipeline: sample rays, build the graph, solve the cut, mesh and
/// voxelise. Deterministic for identical inputs. When `graph_out` is set the
/// segmentation graph is copied there (for DIMACS dumps).
SegmentationResult run_segmentation(const Volume& vol, const Seed& seed,
                                    const SegParams& params, SegGraph* graph_out = nullptr);

}  // namespace raycut
