#include "feller/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace feller {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::NonPositiveMeasure: return "NonPositiveMeasure";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::ConflictingDuplicateEdge: return "ConflictingDuplicateEdge";
    case Errc::Disconnected: return "Disconnected";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::DuplicateVertex: return "DuplicateVertex";
    case Errc::RadiusExceedsTruncation: return "RadiusExceedsTruncation";
    case Errc::MissingValue: return "MissingValue";
    case Errc::FrontierContamination: return "FrontierContamination";
    case Errc::EmptyInterior: return "EmptyInterior";
    case Errc::UnsupportedVertexInU0: return "UnsupportedVertexInU0";
    case Errc::NegativeU0: return "NegativeU0";
    case Errc::VertexOutsideFirstRegion: return "VertexOutsideFirstRegion";
    case Errc::MonotonicityViolation: return "MonotonicityViolation";
    case Errc::OmegaNotInsideRegion: return "OmegaNotInsideRegion";
    case Errc::SolverBreakdown: return "SolverBreakdown";
    case Errc::NotConvergedAtTruncation: return "NotConvergedAtTruncation";
    case Errc::InsufficientAnnuli: return "InsufficientAnnuli";
    case Errc::ConditionViolated: return "ConditionViolated";
    case Errc::StochasticCompletenessNotEstablished:
      return "StochasticCompletenessNotEstablished";
    case Errc::NonPositiveEntry: return "NonPositiveEntry";
    case Errc::LengthTooShort: return "LengthTooShort";
    case Errc::InconclusiveSeries: return "InconclusiveSeries";
    case Errc::TooFewTerms: return "TooFewTerms";
    case Errc::WrongTwistKind: return "WrongTwistKind";
    case Errc::ModelNotClassified: return "ModelNotClassified";
    case Errc::ParseError: return "ParseError";
    case Errc::NotAModel: return "NotAModel";
    case Errc::UnknownCriterion: return "UnknownCriterion";
    case Errc::UnknownExample: return "UnknownExample";
    case Errc::BadParams: return "BadParams";
  }
  return "Error";
}

WeightedGraph WeightedGraph::build(const std::vector<EdgeSpec>& edges,
                                   const std::unordered_map<std::string, double>& measures,
                                   const std::vector<std::string>& frontier) {
  if (edges.empty()) fail(Errc::BadParams, "edge list is empty");

  WeightedGraph g;
  auto intern = [&g](const std::string& name) -> Vertex {
    auto it = g.index_.find(name);
    if (it != g.index_.end()) return it->second;
    Vertex v = static_cast<Vertex>(g.names_.size());
    g.index_.emplace(name, v);
    g.names_.push_back(name);
    return v;
  };

  // Merge duplicate symmetric entries; equal weights (relative 1e-12) are
  // accepted, conflicting weights are an error.
  std::map<std::pair<Vertex, Vertex>, double> weights;
  for (const auto& e : edges) {
    if (e.u == e.v) fail(Errc::SelfLoop, "loop at vertex " + e.u);
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      fail(Errc::NonPositiveWeight, "edge (" + e.u + "," + e.v + ") weight " +
                                        std::to_string(e.weight));
    Vertex a = intern(e.u);
    Vertex b = intern(e.v);
    auto key = std::minmax(a, b);
    auto [it, inserted] = weights.emplace(key, e.weight);
    if (!inserted) {
      double prev = it->second;
      if (std::abs(prev - e.weight) > 1e-12 * std::max(std::abs(prev), std::abs(e.weight)))
        fail(Errc::ConflictingDuplicateEdge,
             "edge (" + e.u + "," + e.v + ") given weights " + std::to_string(prev) +
                 " and " + std::to_string(e.weight));
    }
  }

  const Vertex n = static_cast<Vertex>(g.names_.size());
  g.measure_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    auto it = measures.find(g.names_[v]);
    if (it == measures.end())
      fail(Errc::MissingValue, "no measure for vertex " + g.names_[v]);
    if (!(it->second > 0.0) || !std::isfinite(it->second))
      fail(Errc::NonPositiveMeasure,
           "vertex " + g.names_[v] + " measure " + std::to_string(it->second));
    g.measure_[v] = it->second;
  }

  g.adj_.assign(n, {});
  for (const auto& [key, w] : weights) {
    g.adj_[key.first].emplace_back(key.second, w);
    g.adj_[key.second].emplace_back(key.first, w);
  }
  for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());

  g.frontier_.assign(n, 0);
  for (const auto& name : frontier) {
    auto it = g.index_.find(name);
    if (it == g.index_.end())
      fail(Errc::UnknownVertex, "frontier vertex " + name + " not in edge list");
    g.frontier_[it->second] = 1;
  }
  for (Vertex v = 0; v < n; ++v)
    if (g.frontier_[v]) g.frontier_list_.push_back(v);

  // Connectivity of the non-frontier part, plus reachability of every
  // frontier vertex from it.
  Vertex start = -1;
  for (Vertex v = 0; v < n; ++v)
    if (!g.frontier_[v]) { start = v; break; }
  if (start < 0) fail(Errc::Disconnected, "all vertices are frontier");
  std::vector<char> seen(n, 0);
  std::deque<Vertex> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (auto [w, b] : g.adj_[v]) {
      (void)b;
      if (!seen[w] && !g.frontier_[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (g.frontier_[v]) continue;
    if (!seen[v])
      fail(Errc::Disconnected, "non-frontier vertex " + g.names_[v] +
                                   " unreachable from " + g.names_[start]);
  }
  for (Vertex v : g.frontier_list_) {
    bool attached = false;
    for (auto [w, b] : g.adj_[v]) {
      (void)b;
      if (seen[w] || g.frontier_[w]) { attached = true; break; }
    }
    if (!attached || g.adj_[v].empty())
      fail(Errc::Disconnected, "frontier vertex " + g.names_[v] + " is isolated");
  }
  // Whole-graph connectivity (frontier edges included).
  std::fill(seen.begin(), seen.end(), 0);
  queue = {start};
  seen[start] = 1;
  Vertex reached = 1;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (auto [w, b] : g.adj_[v]) {
      (void)b;
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  if (reached != n) fail(Errc::Disconnected, "graph has more than one component");

  return g;
}

Vertex WeightedGraph::vertex(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) fail(Errc::UnknownVertex, name);
  return it->second;
}

std::optional<Vertex> WeightedGraph::find_vertex(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double WeightedGraph::weighted_degree(Vertex v) const {
  check(v);
  double total = 0.0;
  for (auto [w, b] : adj_[v]) {
    (void)w;
    total += b;
  }
  return total / measure_[v];
}

bool WeightedGraph::adjacent_to_frontier(Vertex v) const {
  check(v);
  for (auto [w, b] : adj_[v]) {
    (void)b;
    if (frontier_[w]) return true;
  }
  return false;
}

WeightedGraph WeightedGraph::glue_pendant(const std::string& host, const std::string& fresh,
                                          double weight, double new_measure) const {
  Vertex hv = vertex(host);
  (void)hv;
  if (index_.count(fresh)) fail(Errc::DuplicateVertex, fresh);
  if (!(weight > 0.0)) fail(Errc::NonPositiveWeight, "pendant weight");
  if (!(new_measure > 0.0)) fail(Errc::NonPositiveMeasure, "pendant measure");

  WeightedGraph g = *this;
  Vertex nv = g.size();
  g.names_.push_back(fresh);
  g.index_.emplace(fresh, nv);
  g.measure_.push_back(new_measure);
  g.frontier_.push_back(0);
  g.adj_.emplace_back();
  g.adj_[nv].emplace_back(g.index_.at(host), weight);
  auto& hn = g.adj_[g.index_.at(host)];
  hn.emplace_back(nv, weight);
  std::sort(hn.begin(), hn.end());
  return g;
}

MetricView metric_view(const WeightedGraph& g, Vertex root) {
  if (root < 0 || root >= g.size()) fail(Errc::UnknownVertex, std::to_string(root));
  MetricView mv;
  mv.root = root;
  mv.distance.assign(g.size(), -1);
  mv.distance[root] = 0;
  std::deque<Vertex> queue{root};
  int maxd = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (auto [w, b] : g.neighbors(v)) {
      (void)b;
      if (mv.distance[w] < 0) {
        mv.distance[w] = mv.distance[v] + 1;
        maxd = std::max(maxd, mv.distance[w]);
        queue.push_back(w);
      }
    }
  }
  mv.spheres.assign(maxd + 1, {});
  for (Vertex v = 0; v < g.size(); ++v) mv.spheres[mv.distance[v]].push_back(v);
  mv.balls.resize(maxd + 1);
  std::vector<Vertex> acc;
  for (int r = 0; r <= maxd; ++r) {
    acc.insert(acc.end(), mv.spheres[r].begin(), mv.spheres[r].end());
    mv.balls[r] = acc;
  }
  return mv;
}

SubgraphRegion make_region(const WeightedGraph& g, std::vector<Vertex> members) {
  SubgraphRegion r;
  r.in_members.assign(g.size(), 0);
  for (Vertex v : members) {
    if (v < 0 || v >= g.size()) fail(Errc::UnknownVertex, std::to_string(v));
    r.in_members[v] = 1;
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  r.members = std::move(members);
  r.in_interior.assign(g.size(), 0);
  for (Vertex v : r.members) {
    bool bdry = g.is_frontier(v);
    if (!bdry) {
      for (auto [w, b] : g.neighbors(v)) {
        (void)b;
        if (!r.in_members[w]) { bdry = true; break; }
      }
    }
    if (bdry) {
      r.boundary.push_back(v);
    } else {
      r.interior.push_back(v);
      r.in_interior[v] = 1;
    }
  }
  return r;
}

bool region_touches_frontier(const WeightedGraph& g, const SubgraphRegion& r) {
  for (Vertex v : r.members) {
    if (g.is_frontier(v) || g.adjacent_to_frontier(v)) return true;
  }
  return false;
}

ExhaustionSequence ball_exhaustion(const WeightedGraph& g, Vertex root,
                                   const std::vector<int>& radii,
                                   bool allow_final_frontier_touch) {
  if (radii.empty()) fail(Errc::BadParams, "no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) fail(Errc::BadParams, "radii must be increasing");

  MetricView mv = metric_view(g, root);
  if (radii.back() > mv.radius())
    fail(Errc::RadiusExceedsTruncation,
         "radius " + std::to_string(radii.back()) + " exceeds truncation radius " +
             std::to_string(mv.radius()));

  ExhaustionSequence ex;
  ex.root = root;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    SubgraphRegion reg = make_region(g, mv.balls[radii[i]]);
    bool touches = region_touches_frontier(g, reg);
    if (touches) {
      bool final = i + 1 == radii.size();
      if (!final || !allow_final_frontier_touch)
        fail(Errc::RadiusExceedsTruncation,
             "ball of radius " + std::to_string(radii[i]) + " touches the frontier");
      ex.final_touches_frontier = true;
    }
    ex.regions.push_back(std::move(reg));
  }
  return ex;
}

CurvatureField curvature_field(const WeightedGraph& g, const MetricView& mv) {
  CurvatureField cf;
  cf.root = mv.root;
  cf.outer.assign(g.size(), 0.0);
  cf.inner.assign(g.size(), 0.0);
  cf.unreliable.assign(g.size(), 0);
  for (Vertex v = 0; v < g.size(); ++v) {
    int r = mv.distance[v];
    double out = 0.0, in = 0.0;
    for (auto [w, b] : g.neighbors(v)) {
      if (mv.distance[w] == r + 1) out += b;
      else if (mv.distance[w] == r - 1) in += b;
    }
    cf.outer[v] = out / g.measure(v);
    cf.inner[v] = in / g.measure(v);
    if (g.is_frontier(v)) cf.unreliable[v] = 1;
  }
  return cf;
}

CurvatureField curvature_field(const WeightedGraph& g, Vertex root) {
  return curvature_field(g, metric_view(g, root));
}

}  // namespace feller
