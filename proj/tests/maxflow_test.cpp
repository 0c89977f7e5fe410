#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "raycut/error.hpp"
#include "raycut/maxflow.hpp"
#include "raycut/seg_graph.hpp"
#include "raycut/sphere_template.hpp"
#include "test_util.hpp"

using namespace raycut;
using raycut::testing::BoundaryEnumerator;
using raycut::testing::matrix_max_flow;
using raycut::testing::random_cost_grid;
using raycut::testing::random_graph;

namespace {

// Capacity of the cut (S, V \ S) in the original network.
Capacity cut_capacity(const FlowNetwork& net, const std::vector<std::uint8_t>& side) {
  Capacity c = 0;
  for (const auto& a : net.arcs()) {
    if (side[a.from] && !side[a.to]) c += a.capacity;
  }
  return c;
}

void expect_valid_flow(const FlowNetwork& net, int s, int t, const MaxFlowResult& res) {
  ASSERT_EQ(res.arc_flow.size(), net.arcs().size());
  std::vector<Capacity> excess(net.node_count(), 0);
  for (std::size_t i = 0; i < net.arcs().size(); ++i) {
    const auto& a = net.arcs()[i];
    EXPECT_GE(res.arc_flow[i], 0);
    EXPECT_LE(res.arc_flow[i], a.capacity);
    excess[a.from] -= res.arc_flow[i];
    excess[a.to] += res.arc_flow[i];
  }
  for (int v = 0; v < net.node_count(); ++v) {
    if (v == s) {
      EXPECT_EQ(excess[v], -res.flow);
    } else if (v == t) {
      EXPECT_EQ(excess[v], res.flow);
    } else {
      EXPECT_EQ(excess[v], 0) << "node " << v;
    }
  }
  ASSERT_EQ(res.source_side.size(), static_cast<std::size_t>(net.node_count()));
  EXPECT_TRUE(res.source_side[s]);
  EXPECT_FALSE(res.source_side[t]);
  EXPECT_EQ(cut_capacity(net, res.source_side), res.flow);
}

CostGrid one_ray(std::vector<double> c) {
  CostGrid g;
  g.rays = 1;
  g.samples = static_cast<int>(c.size());
  g.c = std::move(c);
  return g;
}

SphereTemplate lone_ray() {
  SphereTemplate t;
  t.directions = {{0, 0, 1}};
  t.neighbors = {{}};
  return t;
}

}  // namespace

TEST(MaxFlow, TwoNodeChain) {
  FlowNetwork net(3);  // s=0, a=1, t=2
  net.add_arc(0, 1, 3);
  net.add_arc(1, 2, 2);
  const auto res = max_flow_bk(net, 0, 2);
  EXPECT_EQ(res.flow, 2);
  EXPECT_TRUE(res.source_side[1]);
  EXPECT_EQ(reference_max_flow(net, 0, 2), 2);
  expect_valid_flow(net, 0, 2, res);
}

TEST(MaxFlow, Diamond) {
  // s=0 a=1 b=2 t=3. Cuts: {s}:5, {s,a}:2+2+1=5, {s,b}:3+3=6, {s,a,b}:5.
  FlowNetwork net(4);
  net.add_arc(0, 1, 3);
  net.add_arc(0, 2, 2);
  net.add_arc(1, 3, 2);
  net.add_arc(2, 3, 3);
  net.add_arc(1, 2, 1);
  EXPECT_EQ(max_flow_bk(net, 0, 3).flow, 5);
  EXPECT_EQ(reference_max_flow(net, 0, 3), 5);
  expect_valid_flow(net, 0, 3, max_flow_bk(net, 0, 3));
}

TEST(MaxFlow, TerminalsOnlyGraphHasZeroFlow) {
  // Only non-negative terminal weights and no base forcing: nothing leaves s.
  FlowNetwork net(5);
  net.add_arc(0, 4, 5);
  net.add_arc(1, 4, 0);
  net.add_arc(2, 4, 7);
  EXPECT_EQ(max_flow_bk(net, 3, 4).flow, 0);
  EXPECT_EQ(reference_max_flow(net, 3, 4), 0);
}

TEST(MaxFlow, RandomGraphsAgreeWithOracles) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_graph(rng, trial < 200 ? 40 : 300);
    const auto res = max_flow_bk(g.net, g.source, g.sink);
    const Capacity ek = reference_max_flow(g.net, g.source, g.sink);
    ASSERT_EQ(res.flow, ek) << "trial " << trial;
    ASSERT_EQ(res.flow, matrix_max_flow(g.net, g.source, g.sink)) << "trial " << trial;
    expect_valid_flow(g.net, g.source, g.sink, res);
  }
}

TEST(MaxFlow, ParallelAndAntiParallelArcs) {
  FlowNetwork net(3);
  net.add_arc(0, 1, 4);
  net.add_arc(0, 1, 6);
  net.add_arc(1, 0, 9);
  net.add_arc(1, 2, 8);
  net.add_arc(2, 1, 100);
  net.add_arc(1, 1, 50);
  EXPECT_EQ(max_flow_bk(net, 0, 2).flow, 8);
  EXPECT_EQ(reference_max_flow(net, 0, 2), 8);
}

TEST(Dimacs, RoundTrip) {
  std::mt19937_64 rng(77);
  const auto g = random_graph(rng, 60);
  std::stringstream ss;
  write_dimacs(g.net, g.source, g.sink, ss);
  const DimacsProblem p = read_dimacs(ss);
  EXPECT_EQ(p.source, g.source);
  EXPECT_EQ(p.sink, g.sink);
  ASSERT_EQ(p.net.arcs().size(), g.net.arcs().size());
  for (std::size_t i = 0; i < p.net.arcs().size(); ++i) {
    EXPECT_EQ(p.net.arcs()[i].from, g.net.arcs()[i].from);
    EXPECT_EQ(p.net.arcs()[i].to, g.net.arcs()[i].to);
    EXPECT_EQ(p.net.arcs()[i].capacity, g.net.arcs()[i].capacity);
  }
  EXPECT_EQ(max_flow_bk(p.net, p.source, p.sink).flow,
            max_flow_bk(g.net, g.source, g.sink).flow);
}

TEST(Dimacs, RejectsGarbage) {
  std::istringstream in("p min 3 1\n");
  EXPECT_THROW(read_dimacs(in), Error);
  std::istringstream in2("p max 3 1\nn 1 s\nn 3 t\na 1 9 4\n");
  EXPECT_THROW(read_dimacs(in2), Error);
}

TEST(SolveCut, SingleRayPicksCheapestBoundary) {
  const SegGraph g = build_graph(one_ray({5, 2, 9}), lone_ray(), 0);
  const CutResult cut = solve_cut(g);
  EXPECT_EQ(cut.boundary, (std::vector<int>{1}));
  // Cut value = c[b] + sum of |negative weights| = 2 + 3.
  EXPECT_DOUBLE_EQ(cut.flow_value, 5.0);
  EXPECT_EQ(check_cut(g, lone_ray(), cut).total(), 0u);
}

TEST(SolveCut, OracleAgreesOnSegmentationGraphs) {
  std::mt19937_64 rng(12);
  const SphereTemplate t = build_icosphere(0);
  for (int trial = 0; trial < 20; ++trial) {
    const SegGraph g = build_graph(random_cost_grid(rng, 12, 5), t, trial % 3);
    const ScaledNetwork sn = to_flow_network(g);
    EXPECT_EQ(max_flow_bk(sn.net, sn.source, sn.sink).flow,
              reference_max_flow(sn.net, sn.source, sn.sink));
  }
}

TEST(ExtractBoundary, Examples) {
  const std::vector<std::uint8_t> all(2 * 3 + 2, 1);
  EXPECT_EQ(extract_boundary(all, 2, 3), (std::vector<int>{2, 2}));
  const std::vector<std::uint8_t> base{1, 0, 0, 1, 0, 0};
  EXPECT_EQ(extract_boundary(base, 2, 3), (std::vector<int>{0, 0}));
  const std::vector<std::uint8_t> gap{1, 0, 1, 1, 0, 0};
  EXPECT_THROW(extract_boundary(gap, 2, 3), Error);
  const std::vector<std::uint8_t> empty{0, 0, 0, 1, 0, 0};
  EXPECT_THROW(extract_boundary(empty, 2, 3), Error);
}

TEST(GlobalOptimality, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(31337);
  const SphereTemplate t = build_icosphere(0);
  for (int trial = 0; trial < 6; ++trial) {
    for (int delta : {0, 1}) {
      const CostGrid c = random_cost_grid(rng, 12, 4);
      const SegGraph g = build_graph(c, t, delta);
      const CutResult cut = solve_cut(g);
      EXPECT_EQ(check_cut(g, t, cut).total(), 0u);
      BoundaryEnumerator en(c, t, delta);
      const double best = en.minimum();
      EXPECT_EQ(raycut::testing::boundary_cost(c, cut.boundary), best);
      // Cut value exceeds the boundary cost by the total negative terminal weight.
      double neg = 0.0;
      for (double w : g.weights) neg += std::min(0.0, w);
      EXPECT_EQ(cut.flow_value, best - neg);
    }
  }
}

TEST(Feasibility, DeltaZeroGivesSphere) {
  std::mt19937_64 rng(5);
  for (int s : {0, 1, 2}) {
    const SphereTemplate t = build_icosphere(s);
    const CostGrid c = random_cost_grid(rng, static_cast<int>(t.ray_count()), 10);
    const SegGraph g = build_graph(c, t, 0);
    const CutResult cut = solve_cut(g);
    EXPECT_EQ(check_cut(g, t, cut).total(), 0u);
    for (int b : cut.boundary) EXPECT_EQ(b, cut.boundary[0]);
    // The common radius minimises the summed layer cost.
    double best = 1e300;
    int arg = -1;
    for (int z = 0; z < c.samples; ++z) {
      double sum = 0.0;
      for (int r = 0; r < c.rays; ++r) sum += c.at(r, z);
      if (sum < best) {
        best = sum;
        arg = z;
      }
    }
    EXPECT_EQ(cut.boundary[0], arg);
  }
}

TEST(Feasibility, UnconstrainedLimitIsPerRayArgmin) {
  std::mt19937_64 rng(6);
  const SphereTemplate t = build_icosphere(1);
  const int Z = 8;
  const CostGrid c = random_cost_grid(rng, static_cast<int>(t.ray_count()), Z);
  const SegGraph g = build_graph(c, t, Z - 1);
  const CutResult cut = solve_cut(g);
  for (int r = 0; r < c.rays; ++r) {
    int arg = 0;
    for (int z = 1; z < Z; ++z) {
      if (c.at(r, z) < c.at(r, arg)) arg = z;
    }
    EXPECT_EQ(cut.boundary[r], arg) << "ray " << r;
  }
}

TEST(Feasibility, RandomGridsHaveNoViolations) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  const SphereTemplate t = build_icosphere(2);
  for (int trial = 0; trial < 20; ++trial) {
    CostGrid c;
    c.rays = static_cast<int>(t.ray_count());
    c.samples = 15;
    c.c.resize(std::size_t(c.rays) * c.samples);
    for (auto& x : c.c) x = u(rng);
    const SegGraph g = build_graph(c, t, trial % 4);
    const CutResult cut = solve_cut(g);
    const auto v = check_cut(g, t, cut);
    EXPECT_EQ(v.prefix, 0u);
    EXPECT_EQ(v.smoothness, 0u);
    EXPECT_EQ(v.infinite_arcs, 0u);
  }
}
