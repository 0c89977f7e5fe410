#include "raycut/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "raycut/error.hpp"

namespace raycut {

std::optional<CostModel> parse_cost_model(std::string_view name) {
  if (name == "region") return CostModel::kRegion;
  if (name == "intensity") return CostModel::kIntensity;
  return std::nullopt;
}

std::string_view to_string(CostModel model) {
  return model == CostModel::kRegion ? "region" : "intensity";
}

void SegParams::validate() const {
  if (subdiv < 0 || subdiv > kMaxSubdivision) {
    throw Error(Errc::kSubdivTooLarge, "subdiv must be in [0, 6]");
  }
  if (samples < 2) throw Error(Errc::kInvalidArgument, "samples must be >= 2");
  if (!(max_radius_mm > 0.0) || !std::isfinite(max_radius_mm)) {
    throw Error(Errc::kInvalidArgument, "radius must be positive");
  }
  if (delta_r < 0) throw Error(Errc::kInvalidArgument, "delta_r must be >= 0");
  if (mean_window < 1 || mean_window % 2 == 0) {
    throw Error(Errc::kInvalidArgument, "mean window must be a positive odd number");
  }
  if (region_threshold && !std::isfinite(*region_threshold)) {
    throw Error(Errc::kInvalidArgument, "region threshold must be finite");
  }
}

double SegmentationResult::volume_mm3() const {
  return static_cast<double>(mask.count()) * voxel_volume_mm3(mask.geometry());
}

int SegmentationResult::boundary_min() const {
  return *std::min_element(cut.boundary.begin(), cut.boundary.end());
}

int SegmentationResult::boundary_max() const {
  return *std::max_element(cut.boundary.begin(), cut.boundary.end());
}

Vec3 resolve_seed(const Geometry& g, const Seed& seed) {
  if (seed.world_mm) {
    if (!inside_bounds(g, seed.value)) {
      throw Error(Errc::kSeedOutsideVolume, "seed outside volume");
    }
    return seed.value;
  }
  const Index3 v{static_cast<std::int64_t>(std::llround(seed.value.x)),
                 static_cast<std::int64_t>(std::llround(seed.value.y)),
                 static_cast<std::int64_t>(std::llround(seed.value.z))};
  if (!g.contains(v)) throw Error(Errc::kSeedOutsideVolume, "seed outside volume");
  if (seed.value.x != double(v.i) || seed.value.y != double(v.j) ||
      seed.value.z != double(v.k)) {
    throw Error(Errc::kInvalidArgument, "voxel seed must be integral");
  }
  return index_to_world(g, v);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

SegmentationResult run_segmentation(const Volume& vol, const Seed& seed,
                                    const SegParams& params, SegGraph* graph_out) {
  params.validate();
  const auto t_start = Clock::now();

  SegmentationResult res;
  res.params = params;
  res.seed_mm = resolve_seed(vol.geometry(), seed);
  res.seed_voxel = nearest_voxel(vol.geometry(), res.seed_mm);

  auto t = Clock::now();
  const SphereTemplate tmpl = build_icosphere(params.subdiv);
  res.rays = sample_rays(vol, res.seed_mm, tmpl, params.samples, params.max_radius_mm);
  res.timings.rays_ms = ms_since(t);

  t = Clock::now();
  res.mu = estimate_mean(vol, res.seed_voxel, params.mean_window);
  CostGrid costs = compute_costs(res.rays, res.mu);
  if (params.cost_model == CostModel::kRegion) {
    res.threshold = params.region_threshold ? *params.region_threshold : otsu_threshold(costs.c);
    costs = region_costs(costs, res.threshold);
  }
  const SegGraph graph = build_graph(costs, tmpl, params.delta_r);
  res.node_count = static_cast<std::size_t>(graph.node_count());
  res.arc_count = graph.arcs.size();
  res.timings.graph_ms = ms_since(t);

  t = Clock::now();
  res.cut = solve_cut(graph);
  res.timings.mincut_ms = ms_since(t);
  if (graph_out) *graph_out = graph;

  t = Clock::now();
  res.mesh = extract_mesh(res.cut.boundary, res.rays, tmpl);
  res.mask = voxelize(res.mesh, vol.geometry());
  res.timings.voxelize_ms = ms_since(t);

  res.timings.total_ms = ms_since(t_start);
  return res;
}

}  // namespace raycut
