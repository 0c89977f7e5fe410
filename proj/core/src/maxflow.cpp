#include "raycut/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "raycut/error.hpp"

namespace raycut {

int FlowNetwork::add_arc(int from, int to, Capacity capacity) {
  if (from < 0 || to < 0 || from >= node_count_ || to >= node_count_) {
    throw Error(Errc::kInvalidArgument, "arc endpoint out of range");
  }
  if (capacity < 0) throw Error(Errc::kInvalidArgument, "negative arc capacity");
  arcs_.push_back({from, to, capacity});
  return static_cast<int>(arcs_.size()) - 1;
}

namespace {

// Residual graph shared by both solvers: arc 2k is the k-th network arc,
// arc 2k+1 its reverse. Outgoing residual arcs of v are
// out_[first_[v] .. first_[v+1]).
struct Residual {
  std::vector<int> head;
  std::vector<Capacity> rcap;
  std::vector<int> first;
  std::vector<int> out;

  explicit Residual(const FlowNetwork& net) {
    const auto& arcs = net.arcs();
    const std::size_t m = arcs.size();
    head.resize(2 * m);
    rcap.resize(2 * m);
    first.assign(static_cast<std::size_t>(net.node_count()) + 1, 0);
    for (std::size_t k = 0; k < m; ++k) {
      head[2 * k] = arcs[k].to;
      head[2 * k + 1] = arcs[k].from;
      rcap[2 * k] = arcs[k].capacity;
      rcap[2 * k + 1] = 0;
      ++first[arcs[k].from + 1];
      ++first[arcs[k].to + 1];
    }
    for (std::size_t v = 0; v + 1 < first.size(); ++v) first[v + 1] += first[v];
    out.resize(2 * m);
    std::vector<int> fill(first.begin(), first.end() - 1);
    for (std::size_t k = 0; k < m; ++k) {
      out[fill[arcs[k].from]++] = static_cast<int>(2 * k);
      out[fill[arcs[k].to]++] = static_cast<int>(2 * k + 1);
    }
  }

  int tail(int a) const { return head[a ^ 1]; }

  std::vector<std::uint8_t> reachable_from(int s) const {
    std::vector<std::uint8_t> seen(first.size() - 1, 0);
    std::vector<int> stack = {s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int i = first[v]; i < first[v + 1]; ++i) {
        const int a = out[i];
        if (rcap[a] > 0 && !seen[head[a]]) {
          seen[head[a]] = 1;
          stack.push_back(head[a]);
        }
      }
    }
    return seen;
  }
};

class BkSolver {
 public:
  BkSolver(const FlowNetwork& net, int source, int sink)
      : g_(net), s_(source), t_(sink) {
    const std::size_t n = static_cast<std::size_t>(net.node_count());
    tree_.assign(n, kFree);
    parent_.assign(n, kNone);
    ts_.assign(n, 0);
    dist_.assign(n, 0);
    active_.assign(n, 0);
  }

  Capacity run() {
    if (s_ == t_) throw Error(Errc::kInvalidArgument, "source equals sink");
    tree_[s_] = kSource;
    parent_[s_] = kRoot;
    tree_[t_] = kSink;
    parent_[t_] = kRoot;
    activate(s_);
    activate(t_);

    while (true) {
      const int p = next_active();
      if (p < 0) break;
      const int bridge = grow(p);
      if (bridge < 0) continue;
      // p may still have unexplored arcs; keep it at the front.
      active_[p] = 1;
      queue_.push_front(p);
      ++time_;
      augment(bridge);
      adopt_orphans();
    }
    return flow_;
  }

  const Residual& residual() const { return g_; }

 private:
  static constexpr std::uint8_t kFree = 0;
  static constexpr std::uint8_t kSource = 1;
  static constexpr std::uint8_t kSink = 2;
  static constexpr int kNone = -1;  // orphan
  static constexpr int kRoot = -2;  // terminal itself
  static constexpr int kInfDist = std::numeric_limits<int>::max();

  void activate(int v) {
    if (!active_[v]) {
      active_[v] = 1;
      queue_.push_back(v);
    }
  }

  int next_active() {
    while (!queue_.empty()) {
      const int v = queue_.front();
      queue_.pop_front();
      active_[v] = 0;
      if (tree_[v] != kFree) return v;
    }
    return -1;
  }

  // Grows the tree containing p by one layer. Returns the arc from the
  // source tree to the sink tree when the two trees touch, else -1.
  int grow(int p) {
    for (int i = g_.first[p]; i < g_.first[p + 1]; ++i) {
      const int a = g_.out[i];
      const int q = g_.head[a];
      // Arc along which flow would pass: p->q in the source tree,
      // q->p in the sink tree.
      const int flow_arc = tree_[p] == kSource ? a : (a ^ 1);
      if (g_.rcap[flow_arc] == 0) continue;
      if (tree_[q] == kFree) {
        tree_[q] = tree_[p];
        parent_[q] = flow_arc;
        ts_[q] = ts_[p];
        dist_[q] = dist_[p] + 1;
        activate(q);
      } else if (tree_[q] != tree_[p]) {
        return flow_arc;
      } else if (ts_[q] <= ts_[p] && dist_[q] > dist_[p]) {
        // Re-hang q under p to keep paths short.
        parent_[q] = flow_arc;
        ts_[q] = ts_[p];
        dist_[q] = dist_[p] + 1;
      }
    }
    return -1;
  }

  // Next node towards the root from v along its parent arc.
  int up(int v) const {
    const int a = parent_[v];
    return tree_[v] == kSource ? g_.tail(a) : g_.head[a];
  }

  void augment(int bridge) {
    Capacity bottleneck = g_.rcap[bridge];
    for (int v = g_.tail(bridge); parent_[v] != kRoot; v = up(v)) {
      bottleneck = std::min(bottleneck, g_.rcap[parent_[v]]);
    }
    for (int v = g_.head[bridge]; parent_[v] != kRoot; v = up(v)) {
      bottleneck = std::min(bottleneck, g_.rcap[parent_[v]]);
    }

    push(bridge, bottleneck);
    for (int v = g_.tail(bridge); parent_[v] != kRoot;) {
      const int a = parent_[v];
      const int next = g_.tail(a);
      push(a, bottleneck);
      if (g_.rcap[a] == 0) make_orphan(v);
      v = next;
    }
    for (int v = g_.head[bridge]; parent_[v] != kRoot;) {
      const int a = parent_[v];
      const int next = g_.head[a];
      push(a, bottleneck);
      if (g_.rcap[a] == 0) make_orphan(v);
      v = next;
    }
    flow_ += bottleneck;
  }

  void push(int a, Capacity f) {
    g_.rcap[a] -= f;
    g_.rcap[a ^ 1] += f;
  }

  void make_orphan(int v) {
    parent_[v] = kNone;
    orphans_.push_back(v);
  }

  void adopt_orphans() {
    while (!orphans_.empty()) {
      const int v = orphans_.front();
      orphans_.pop_front();
      process_orphan(v);
    }
  }

  // Distance from q to its tree root, or kInfDist when q hangs off an
  // orphan. Marks the traversed path with the current timestamp.
  int origin_distance(int q) {
    int d = 0;
    int j = q;
    while (true) {
      if (ts_[j] == time_) {
        d += dist_[j];
        break;
      }
      const int a = parent_[j];
      if (a == kRoot) {
        ts_[j] = time_;
        dist_[j] = 0;
        break;
      }
      if (a == kNone) return kInfDist;
      ++d;
      j = up(j);
    }
    int mark = d;
    for (j = q; ts_[j] != time_; j = up(j)) {
      ts_[j] = time_;
      dist_[j] = mark--;
    }
    return d;
  }

  void process_orphan(int v) {
    const std::uint8_t tree = tree_[v];
    int best_arc = kNone;
    int best_dist = kInfDist;
    for (int i = g_.first[v]; i < g_.first[v + 1]; ++i) {
      const int a = g_.out[i];
      const int q = g_.head[a];
      if (tree_[q] != tree) continue;
      // Candidate parent arc: q->v in the source tree, v->q in the sink tree.
      const int parent_arc = tree == kSource ? (a ^ 1) : a;
      if (g_.rcap[parent_arc] == 0) continue;
      const int d = origin_distance(q);
      if (d < best_dist) {
        best_dist = d;
        best_arc = parent_arc;
      }
    }
    if (best_arc != kNone) {
      parent_[v] = best_arc;
      ts_[v] = time_;
      dist_[v] = best_dist + 1;
      return;
    }

    for (int i = g_.first[v]; i < g_.first[v + 1]; ++i) {
      const int a = g_.out[i];
      const int q = g_.head[a];
      if (tree_[q] != tree) continue;
      const int into_v = tree == kSource ? (a ^ 1) : a;
      if (g_.rcap[into_v] > 0) activate(q);
      if (parent_[q] >= 0 && up(q) == v) make_orphan(q);
    }
    tree_[v] = kFree;
  }

  Residual g_;
  int s_;
  int t_;
  Capacity flow_ = 0;
  int time_ = 0;
  std::vector<std::uint8_t> tree_;
  std::vector<int> parent_;
  std::vector<int> ts_;
  std::vector<int> dist_;
  std::vector<std::uint8_t> active_;
  std::deque<int> queue_;
  std::deque<int> orphans_;
};

void check_terminals(const FlowNetwork& net, int source, int sink) {
  if (source < 0 || sink < 0 || source >= net.node_count() || sink >= net.node_count() ||
      source == sink) {
    throw Error(Errc::kInvalidArgument, "invalid source/sink pair");
  }
}

}  // namespace

MaxFlowResult max_flow_bk(const FlowNetwork& net, int source, int sink) {
  check_terminals(net, source, sink);
  BkSolver solver(net, source, sink);
  MaxFlowResult result;
  result.flow = solver.run();
  const Residual& res = solver.residual();
  result.source_side = res.reachable_from(source);
  const auto& arcs = net.arcs();
  result.arc_flow.resize(arcs.size());
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    result.arc_flow[k] = arcs[k].capacity - res.rcap[2 * k];
  }
  return result;
}

Capacity reference_max_flow(const FlowNetwork& net, int source, int sink) {
  check_terminals(net, source, sink);
  // Plain adjacency-list Edmonds-Karp, deliberately independent of the
  // CSR residual used by the BK solver.
  struct Edge {
    int to;
    std::size_t rev;
    Capacity cap;
  };
  std::vector<std::vector<Edge>> adj(static_cast<std::size_t>(net.node_count()));
  for (const auto& a : net.arcs()) {
    adj[a.from].push_back({a.to, adj[a.to].size(), a.capacity});
    adj[a.to].push_back({a.from, adj[a.from].size() - 1, 0});
  }

  Capacity total = 0;
  std::vector<std::pair<int, std::size_t>> via(adj.size());
  while (true) {
    std::fill(via.begin(), via.end(), std::make_pair(-1, std::size_t{0}));
    via[source] = {source, 0};
    std::queue<int> bfs;
    bfs.push(source);
    while (!bfs.empty() && via[sink].first < 0) {
      const int v = bfs.front();
      bfs.pop();
      for (std::size_t e = 0; e < adj[v].size(); ++e) {
        const Edge& edge = adj[v][e];
        if (edge.cap > 0 && via[edge.to].first < 0) {
          via[edge.to] = {v, e};
          bfs.push(edge.to);
        }
      }
    }
    if (via[sink].first < 0) break;
    Capacity f = std::numeric_limits<Capacity>::max();
    for (int v = sink; v != source; v = via[v].first) {
      f = std::min(f, adj[via[v].first][via[v].second].cap);
    }
    for (int v = sink; v != source; v = via[v].first) {
      Edge& edge = adj[via[v].first][via[v].second];
      edge.cap -= f;
      adj[v][edge.rev].cap += f;
    }
    total += f;
  }
  return total;
}

ScaledNetwork to_flow_network(const SegGraph& g) {
  ScaledNetwork out;
  out.net = FlowNetwork(g.node_count());
  out.net.reserve(g.arcs.size());
  out.source = g.source();
  out.sink = g.sink();

  constexpr double kLimit = 4.0e18;
  double finite_sum = 0.0;
  Capacity scaled_sum = 0;
  for (const auto& a : g.arcs) {
    if (a.kind != ArcKind::kTerminal) continue;
    const double scaled = std::round(a.capacity * kCapacityScale);
    finite_sum += scaled;
    if (finite_sum > kLimit) {
      throw Error(Errc::kInvalidArgument,
                  "terminal capacities overflow the 64-bit fixed-point range");
    }
    scaled_sum += static_cast<Capacity>(scaled);
  }
  out.inf_cap = scaled_sum + 1;
  for (const auto& a : g.arcs) {
    const Capacity cap = a.kind == ArcKind::kTerminal
                             ? static_cast<Capacity>(std::round(a.capacity * kCapacityScale))
                             : out.inf_cap;
    out.net.add_arc(a.from, a.to, cap);
  }
  return out;
}

std::vector<int> extract_boundary(std::span<const std::uint8_t> source_side, int rays,
                                  int samples) {
  if (source_side.size() < static_cast<std::size_t>(rays) * samples) {
    throw Error(Errc::kInvalidArgument, "cut is smaller than the ray lattice");
  }
  std::vector<int> b(static_cast<std::size_t>(rays));
  for (int r = 0; r < rays; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * samples;
    int z = 0;
    while (z < samples && source_side[base + z]) ++z;
    for (int k = z; k < samples; ++k) {
      if (source_side[base + k]) {
        throw Error(Errc::kMalformedCut, "ray " + std::to_string(r) +
                                             " source side is not a prefix");
      }
    }
    if (z == 0) {
      throw Error(Errc::kMalformedCut, "ray " + std::to_string(r) +
                                           " has no node on the source side");
    }
    b[r] = z - 1;
  }
  return b;
}

CutResult solve_cut(const SegGraph& g) {
  const ScaledNetwork scaled = to_flow_network(g);
  MaxFlowResult mf = max_flow_bk(scaled.net, scaled.source, scaled.sink);
  CutResult cut;
  cut.scaled_flow = mf.flow;
  cut.flow_value = static_cast<double>(mf.flow) / kCapacityScale;
  cut.source_side = std::move(mf.source_side);
  cut.boundary = extract_boundary(cut.source_side, g.rays, g.samples);
  return cut;
}

CutViolations check_cut(const SegGraph& g, const SphereTemplate& tmpl, const CutResult& cut) {
  CutViolations v;
  for (int r = 0; r < g.rays; ++r) {
    bool seen_sink = false;
    for (int z = 0; z < g.samples; ++z) {
      const bool src = cut.source_side[static_cast<std::size_t>(g.node(r, z))] != 0;
      if (z == 0 && !src) {
        ++v.prefix;
        break;
      }
      if (!src) {
        seen_sink = true;
      } else if (seen_sink) {
        ++v.prefix;
        break;
      }
    }
  }
  if (cut.boundary.size() == static_cast<std::size_t>(g.rays)) {
    for (int r = 0; r < g.rays; ++r) {
      for (int n : tmpl.neighbors[r]) {
        if (std::abs(cut.boundary[r] - cut.boundary[n]) > g.delta_r) ++v.smoothness;
      }
    }
  }
  for (const auto& a : g.arcs) {
    if (a.kind == ArcKind::kTerminal) continue;
    if (cut.source_side[a.from] && !cut.source_side[a.to]) ++v.infinite_arcs;
  }
  return v;
}

void write_dimacs(const FlowNetwork& net, int source, int sink, std::ostream& out) {
  out << "c raycut max-flow problem\n";
  out << "p max " << net.node_count() << ' ' << net.arcs().size() << '\n';
  out << "n " << source + 1 << " s\n";
  out << "n " << sink + 1 << " t\n";
  for (const auto& a : net.arcs()) {
    out << "a " << a.from + 1 << ' ' << a.to + 1 << ' ' << a.capacity << '\n';
  }
}

void write_dimacs(const SegGraph& g, std::ostream& out) {
  const ScaledNetwork scaled = to_flow_network(g);
  write_dimacs(scaled.net, scaled.source, scaled.sink, out);
}

DimacsProblem read_dimacs(std::istream& in) {
  DimacsProblem prob;
  std::string line;
  bool have_problem = false;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(Errc::kMalformedHeader,
                "DIMACS line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    char tag = 0;
    ls >> tag;
    if (tag == 'p') {
      std::string kind;
      long long n = 0, m = 0;
      if (!(ls >> kind >> n >> m) || kind != "max" || n < 2 || m < 0) {
        fail("malformed problem line");
      }
      prob.net = FlowNetwork(static_cast<int>(n));
      prob.net.reserve(static_cast<std::size_t>(m));
      have_problem = true;
    } else if (tag == 'n') {
      long long id = 0;
      char which = 0;
      if (!have_problem || !(ls >> id >> which)) fail("malformed node line");
      if (id < 1 || id > prob.net.node_count()) fail("node id out of range");
      if (which == 's') {
        prob.source = static_cast<int>(id - 1);
      } else if (which == 't') {
        prob.sink = static_cast<int>(id - 1);
      } else {
        fail("node designator must be s or t");
      }
    } else if (tag == 'a') {
      long long u = 0, v = 0;
      Capacity cap = 0;
      if (!have_problem || !(ls >> u >> v >> cap)) fail("malformed arc line");
      if (u < 1 || v < 1 || u > prob.net.node_count() || v > prob.net.node_count()) {
        fail("arc endpoint out of range");
      }
      prob.net.add_arc(static_cast<int>(u - 1), static_cast<int>(v - 1), cap);
    } else {
      fail("unknown line type");
    }
  }
  if (!have_problem || prob.source < 0 || prob.sink < 0) {
    throw Error(Errc::kMalformedHeader, "DIMACS input lacks a problem line or terminals");
  }
  return prob;
}

}  // namespace raycut
