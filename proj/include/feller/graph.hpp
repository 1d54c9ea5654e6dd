#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "feller/errors.hpp"

namespace feller {

using Vertex = std::int32_t;

struct EdgeSpec {
  std::string u;
  std::string v;
  double weight;
};

/// Finite truncation of a locally finite weighted graph (X, b, m).
/// Vertices are opaque names mapped to dense indices in order of first
/// appearance in the edge list. The frontier marks cut points: vertices
/// whose neighborhood in the infinite graph was clipped by the truncation.
class WeightedGraph {
 public:
  static WeightedGraph build(const std::vector<EdgeSpec>& edges,
                             const std::unordered_map<std::string, double>& measures,
                             const std::vector<std::string>& frontier);

  Vertex size() const { return static_cast<Vertex>(adj_.size()); }
  const std::string& name(Vertex v) const { return names_[check(v)]; }
  Vertex vertex(const std::string& name) const;
  std::optional<Vertex> find_vertex(const std::string& name) const;

  std::span<const std::pair<Vertex, double>> neighbors(Vertex v) const {
    return adj_[check(v)];
  }
  double measure(Vertex v) const { return measure_[check(v)]; }
  bool is_frontier(Vertex v) const { return frontier_[check(v)] != 0; }
  const std::vector<Vertex>& frontier_vertices() const { return frontier_list_; }

  /// deg(x) = (1/m(x)) sum_y b(x,y)
  double weighted_degree(Vertex v) const;

  /// Returns a new graph with one extra vertex attached to host; this
  /// graph is unchanged.
  WeightedGraph glue_pendant(const std::string& host, const std::string& fresh,
                             double weight, double new_measure) const;

  bool adjacent_to_frontier(Vertex v) const;

 private:
  WeightedGraph() = default;

  Vertex check(Vertex v) const {
    if (v < 0 || v >= size()) fail(Errc::UnknownVertex, "vertex index " + std::to_string(v));
    return v;
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::vector<std::pair<Vertex, double>>> adj_;
  std::vector<double> measure_;
  std::vector<char> frontier_;
  std::vector<Vertex> frontier_list_;
};

/// Combinatorial metric data rooted at x0: BFS distances, spheres S_r and
/// balls B_r. Every vertex at distance r>0 has a neighbor at distance r-1.
struct MetricView {
  Vertex root = -1;
  std::vector<int> distance;
  std::vector<std::vector<Vertex>> spheres;
  std::vector<std::vector<Vertex>> balls;

  int radius() const { return static_cast<int>(spheres.size()) - 1; }
  int dist(Vertex v) const { return distance[v]; }
};

MetricView metric_view(const WeightedGraph& g, Vertex root);

/// A finite region Omega with its vertex boundary and interior.
/// Frontier vertices inside Omega are always classified as boundary: their
/// missing neighbors lie outside any representable region.
struct SubgraphRegion {
  std::vector<Vertex> members;
  std::vector<Vertex> boundary;
  std::vector<Vertex> interior;
  std::vector<char> in_members;   // indexed by host vertex
  std::vector<char> in_interior;  // indexed by host vertex

  bool contains(Vertex v) const { return in_members[v] != 0; }
  bool interior_contains(Vertex v) const { return in_interior[v] != 0; }
};

SubgraphRegion make_region(const WeightedGraph& g, std::vector<Vertex> members);

/// Increasing sequence of regions. No region may touch the truncation
/// frontier (contain a frontier vertex or neighbor one) except the final
/// region when explicitly allowed, in which case it is flagged.
struct ExhaustionSequence {
  std::vector<SubgraphRegion> regions;
  Vertex root = -1;
  bool final_touches_frontier = false;
};

ExhaustionSequence ball_exhaustion(const WeightedGraph& g, Vertex root,
                                   const std::vector<int>& radii,
                                   bool allow_final_frontier_touch = false);

bool region_touches_frontier(const WeightedGraph& g, const SubgraphRegion& r);

/// kappa_+/- fields around a root: weight into the next/previous sphere,
/// normalized by the vertex measure. Values at frontier vertices are
/// flagged unreliable (outward edges may be missing).
struct CurvatureField {
  Vertex root = -1;
  std::vector<double> outer;
  std::vector<double> inner;
  std::vector<char> unreliable;
};

CurvatureField curvature_field(const WeightedGraph& g, Vertex root);
CurvatureField curvature_field(const WeightedGraph& g, const MetricView& mv);

}  // namespace feller
