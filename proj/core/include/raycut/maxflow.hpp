#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "raycut/seg_graph.hpp"
#include "raycut/sphere_template.hpp"

namespace raycut {

using Capacity = std::int64_t;

/// Directed network with integer capacities. Parallel and antiparallel
/// arcs are allowed; each added arc keeps its own residual pair.
class FlowNetwork {
 public:
  struct Arc {
    int from = 0;
    int to = 0;
    Capacity capacity = 0;
  };

  FlowNetwork() = default;
  explicit FlowNetwork(int node_count) : node_count_(node_count) {}

  int node_count() const { return node_count_; }
  int add_arc(int from, int to, Capacity capacity);
  const std::vector<Arc>& arcs() const { return arcs_; }
  void reserve(std::size_t arcs) { arcs_.reserve(arcs); }

 private:
  int node_count_ = 0;
  std::vector<Arc> arcs_;
};

struct MaxFlowResult {
  Capacity flow = 0;
  std::vector<std::uint8_t> source_side;  // reachable from s in the residual graph
  std::vector<Capacity> arc_flow;         // one entry per FlowNetwork arc
};

/// Boykov-Kolmogorov augmenting paths with search-tree reuse. Active nodes
/// and orphans are processed in FIFO order, so a given network always yields
/// the same flow decomposition.
MaxFlowResult max_flow_bk(const FlowNetwork& net, int source, int sink);

/// Shortest-augmenting-path (Edmonds-Karp) max flow. Slow; used as an
/// independent oracle for max_flow_bk.
Capacity reference_max_flow(const FlowNetwork& net, int source, int sink);

/// SegGraph lowered to integers: finite capacities are multiplied by 2^20
/// and rounded; infinite arcs get 1 + the sum of all scaled finite caps.
struct ScaledNetwork {
  FlowNetwork net;
  int source = 0;
  int sink = 0;
  Capacity inf_cap = 0;
};

inline constexpr double kCapacityScale = 1048576.0;  // 2^20

ScaledNetwork to_flow_network(const SegGraph& g);

struct CutResult {
  double flow_value = 0.0;  // scaled_flow / 2^20
  Capacity scaled_flow = 0;
  std::vector<std::uint8_t> source_side;
  std::vector<int> boundary;  // b_r, one per ray
};

/// Solves the min cut on a segmentation graph and reads off b_r.
CutResult solve_cut(const SegGraph& g);

/// b_r = largest z with node (r,z) on the source side. Throws kMalformedCut
/// when a ray's source-side nodes do not form a non-empty prefix.
std::vector<int> extract_boundary(std::span<const std::uint8_t> source_side, int rays,
                                  int samples);

struct CutViolations {
  std::size_t prefix = 0;          // rays whose source set is not a prefix
  std::size_t smoothness = 0;      // neighbour pairs with |b_r - b_n| > delta_r
  std::size_t infinite_arcs = 0;   // infinite arcs leaving the source side
  std::size_t total() const { return prefix + smoothness + infinite_arcs; }
};

CutViolations check_cut(const SegGraph& g, const SphereTemplate& tmpl, const CutResult& cut);

/// DIMACS max-flow text: "p max N M", "n <id> s", "n <id> t", "a u v cap",
/// node ids 1-based.
void write_dimacs(const FlowNetwork& net, int source, int sink, std::ostream& out);
void write_dimacs(const SegGraph& g, std::ostream& out);

struct DimacsProblem {
  FlowNetwork net;
  int source = -1;
  int sink = -1;
};

DimacsProblem read_dimacs(std::istream& in);

}  // namespace raycut
