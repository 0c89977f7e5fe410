#include "raycut/seg_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "raycut/error.hpp"

namespace raycut {

double estimate_mean(const Volume& vol, const Index3& seed, int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(Errc::kInvalidArgument, "mean window must be a positive odd number");
  }
  const Geometry& g = vol.geometry();
  if (!g.contains(seed)) throw Error(Errc::kSeedOutsideVolume, "seed outside volume");
  const std::int64_t h = window / 2;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::int64_t k = seed.k - h; k <= seed.k + h; ++k) {
    for (std::int64_t j = seed.j - h; j <= seed.j + h; ++j) {
      for (std::int64_t i = seed.i - h; i <= seed.i + h; ++i) {
        if (!g.contains({i, j, k})) continue;
        sum += vol.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                      static_cast<std::size_t>(k));
        ++n;
      }
    }
  }
  return sum / static_cast<double>(n);
}

CostGrid compute_costs(const RayGrid& rays, double mu) {
  CostGrid out;
  out.mu = mu;
  out.rays = rays.rays;
  out.samples = rays.samples;
  out.c.resize(rays.intensities.size());
  std::transform(rays.intensities.begin(), rays.intensities.end(), out.c.begin(),
                 [mu](double v) { return std::abs(v - mu); });
  return out;
}

CostGrid region_costs(const CostGrid& intensity_costs, double threshold) {
  CostGrid out = intensity_costs;
  for (int r = 0; r < out.rays; ++r) {
    double acc = 0.0;
    for (int z = 0; z < out.samples; ++z) {
      const std::size_t i = static_cast<std::size_t>(r) * out.samples + z;
      acc += intensity_costs.c[i] - threshold;
      out.c[i] = acc;
    }
  }
  return out;
}

double otsu_threshold(const std::vector<double>& values, int bins) {
  if (values.empty()) throw Error(Errc::kEmptyInput, "no values to threshold");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return lo;
  const double width = (hi - lo) / bins;
  std::vector<double> hist(bins, 0.0);
  for (double v : values) {
    auto b = static_cast<int>((v - lo) / width);
    hist[std::clamp(b, 0, bins - 1)] += 1.0;
  }
  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (int b = 0; b < bins; ++b) sum_all += (b + 0.5) * hist[b];

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_bin = 0;
  for (int b = 0; b < bins - 1; ++b) {
    w0 += hist[b];
    sum0 += (b + 0.5) * hist[b];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_bin = b;
    }
  }
  return lo + (best_bin + 1) * width;
}

std::vector<double> terminal_weights(const CostGrid& costs) {
  std::vector<double> w(costs.c.size());
  for (int r = 0; r < costs.rays; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * costs.samples;
    w[base] = costs.c[base];
    for (int z = 1; z < costs.samples; ++z) {
      w[base + z] = costs.c[base + z] - costs.c[base + z - 1];
    }
  }
  return w;
}

SegGraph build_graph(const CostGrid& costs, const SphereTemplate& tmpl, int delta_r) {
  if (delta_r < 0) throw Error(Errc::kInvalidArgument, "delta_r must be non-negative");
  if (costs.rays != static_cast<int>(tmpl.ray_count())) {
    throw Error(Errc::kInvalidArgument, "cost grid has " + std::to_string(costs.rays) +
                                            " rays but the template has " +
                                            std::to_string(tmpl.ray_count()));
  }
  if (costs.samples < 1 ||
      costs.c.size() != static_cast<std::size_t>(costs.rays) * costs.samples) {
    throw Error(Errc::kInvalidArgument, "cost grid size does not match rays x samples");
  }
  for (double v : costs.c) {
    if (!std::isfinite(v)) throw Error(Errc::kInvalidArgument, "non-finite cost");
  }

  SegGraph g;
  g.rays = costs.rays;
  g.samples = costs.samples;
  g.delta_r = delta_r;
  g.weights = terminal_weights(costs);

  double abs_sum = 0.0;
  for (double w : g.weights) abs_sum += std::abs(w);
  g.inf_cap = 1.0 + abs_sum;

  const int R = g.rays;
  const int Z = g.samples;
  std::size_t neighbor_pairs = 0;
  for (const auto& n : tmpl.neighbors) neighbor_pairs += n.size();
  g.arcs.reserve(static_cast<std::size_t>(R) * (Z - 1) + neighbor_pairs * Z +
                 static_cast<std::size_t>(R) * (Z + 1));

  for (int r = 0; r < R; ++r) {
    for (int z = 1; z < Z; ++z) {
      g.arcs.push_back({g.node(r, z), g.node(r, z - 1), g.inf_cap, ArcKind::kRayZ});
    }
  }
  for (int r = 0; r < R; ++r) {
    for (int n : tmpl.neighbors[r]) {
      for (int z = 0; z < Z; ++z) {
        g.arcs.push_back(
            {g.node(r, z), g.node(n, std::max(0, z - delta_r)), g.inf_cap, ArcKind::kRayR});
      }
    }
  }
  for (int r = 0; r < R; ++r) {
    for (int z = 0; z < Z; ++z) {
      const double w = g.weights[static_cast<std::size_t>(g.node(r, z))];
      if (w < 0.0) {
        g.arcs.push_back({g.source(), g.node(r, z), -w, ArcKind::kTerminal});
      } else {
        g.arcs.push_back({g.node(r, z), g.sink(), w, ArcKind::kTerminal});
      }
    }
  }
  for (int r = 0; r < R; ++r) {
    g.arcs.push_back({g.source(), g.node(r, 0), g.inf_cap, ArcKind::kBase});
  }
  return g;
}

}  // namespace raycut
