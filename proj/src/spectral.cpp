#include "feller/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "feller/parallel.hpp"

namespace feller {

const char* evidence_name(Evidence e) {
  switch (e) {
    case Evidence::Supports: return "supports";
    case Evidence::Contradicts: return "contradicts";
    case Evidence::Inconclusive: return "inconclusive";
  }
  return "?";
}

VertexFunction apply_formal_laplacian(const WeightedGraph& g, const VertexFunction& f,
                                      const std::vector<Vertex>& at) {
  VertexFunction out = VertexFunction::undefined(g.size());
  for (Vertex x : at) {
    if (x < 0 || x >= g.size()) fail(Errc::UnknownVertex, std::to_string(x));
    if (g.is_frontier(x) || g.adjacent_to_frontier(x))
      fail(Errc::FrontierContamination,
           "Laplacian at " + g.name(x) + " sees the truncation cut");
    if (!f.has(x)) fail(Errc::MissingValue, "f undefined at " + g.name(x));
    double acc = 0.0;
    for (auto [y, b] : g.neighbors(x)) {
      if (!f.has(y)) fail(Errc::MissingValue, "f undefined at neighbor " + g.name(y));
      acc += b * (f.values[x] - f.values[y]);
    }
    out.set(x, acc / g.measure(x));
  }
  return out;
}

double l2_norm(const WeightedGraph& g, const VertexFunction& f) {
  double acc = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!f.has(v)) fail(Errc::MissingValue, "f undefined at " + g.name(v));
    acc += f.values[v] * f.values[v] * g.measure(v);
  }
  return std::sqrt(acc);
}

DirichletOperator dirichlet_operator(const WeightedGraph& g, const SubgraphRegion& region) {
  if (region.interior.empty()) fail(Errc::EmptyInterior, "region has no interior");

  DirichletOperator op;
  op.region = region;
  op.interior = region.interior;
  op.pos.assign(g.size(), -1);
  const int n = static_cast<int>(op.interior.size());
  for (int i = 0; i < n; ++i) op.pos[op.interior[i]] = i;

  op.m.resize(n);
  op.sqrt_m.resize(n);
  for (int i = 0; i < n; ++i) {
    op.m[i] = g.measure(op.interior[i]);
    op.sqrt_m[i] = std::sqrt(op.m[i]);
  }

  // Row x: deg(x) on the diagonal, -b(x,y)/sqrt(m_x m_y) for interior
  // neighbors; edges into the boundary contribute to the diagonal only
  // (zero extension).
  op.sym = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vertex x = op.interior[i];
    double wsum = 0.0;
    for (auto [y, b] : g.neighbors(x)) {
      wsum += b;
      int j = op.pos[y];
      if (j >= 0) op.sym(i, j) = -b / (op.sqrt_m[i] * op.sqrt_m[j]);
    }
    op.sym(i, i) = wsum / op.m[i];
  }
  return op;
}

namespace {

Eigen::VectorXd interior_vector(const WeightedGraph& g, const DirichletOperator& op,
                                const VertexFunction& u0) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(op.interior.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!u0.has(v)) continue;
    if (u0.values[v] == 0.0) continue;
    int i = op.pos[v];
    if (i < 0)
      fail(Errc::UnsupportedVertexInU0,
           "u0 nonzero at " + g.name(v) + " outside the region interior");
    u[i] = u0.values[v];
  }
  return u;
}

}  // namespace

HeatEvolution heat_evolve(const WeightedGraph& g, const DirichletOperator& op,
                          const VertexFunction& u0, const std::vector<double>& times) {
  if (times.empty()) fail(Errc::BadParams, "empty time grid");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0) fail(Errc::BadParams, "negative time");
    if (k && times[k] <= times[k - 1]) fail(Errc::BadParams, "times must be increasing");
  }

  Eigen::VectorXd u = interior_vector(g, op, u0);
  Eigen::VectorXd y0 = op.sqrt_m.cwiseProduct(u);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.sym);
  if (eig.info() != Eigen::Success) fail(Errc::SolverBreakdown, "eigendecomposition failed");
  const Eigen::MatrixXd& V = eig.eigenvectors();
  const Eigen::VectorXd& lam = eig.eigenvalues();
  Eigen::VectorXd c = V.transpose() * y0;

  HeatEvolution ev;
  ev.interior = op.interior;
  ev.times = times;
  for (double t : times) {
    // time zero is the identity, exactly
    Eigen::VectorXd yt =
        t == 0.0 ? y0 : V * (Eigen::exp(-t * lam.array()) * c.array()).matrix();
    Eigen::VectorXd ut = t == 0.0 ? u : yt.cwiseQuotient(op.sqrt_m);
    double mass = 0.0, l2 = 0.0;
    for (int i = 0; i < ut.size(); ++i) {
      mass += ut[i] * op.m[i];
      l2 += ut[i] * ut[i] * op.m[i];
    }
    ev.values.push_back(std::move(ut));
    ev.mass.push_back(mass);
    ev.l2norm.push_back(std::sqrt(l2));
  }
  return ev;
}

namespace {

struct RegionHeat {
  double value_at_x;
  double mass;
  double frontier_sup;
};

// Evolves delta_y / m(y) on one region and reads off p_t^n(x,y), the total
// mass, and the sup over frontier-adjacent vertices.
RegionHeat kernel_on_region(const WeightedGraph& g, const SubgraphRegion& region,
                            Vertex x, Vertex y, double t) {
  DirichletOperator op = dirichlet_operator(g, region);
  VertexFunction u0 = VertexFunction::undefined(g.size());
  u0.set(y, 1.0 / g.measure(y));
  HeatEvolution ev = heat_evolve(g, op, u0, {t});
  RegionHeat rh{0.0, ev.mass[0], 0.0};
  for (std::size_t i = 0; i < op.interior.size(); ++i) {
    Vertex v = op.interior[i];
    if (v == x) rh.value_at_x = ev.values[0][i];
    if (g.adjacent_to_frontier(v))
      rh.frontier_sup = std::max(rh.frontier_sup, std::abs(ev.values[0][i]));
  }
  return rh;
}

std::vector<RegionHeat> kernel_sweep(const WeightedGraph& g, const ExhaustionSequence& ex,
                                     Vertex x, Vertex y, double t) {
  if (ex.regions.empty()) fail(Errc::BadParams, "empty exhaustion");
  const SubgraphRegion& first = ex.regions.front();
  if (!first.interior_contains(x))
    fail(Errc::VertexOutsideFirstRegion, g.name(x));
  if (!first.interior_contains(y))
    fail(Errc::VertexOutsideFirstRegion, g.name(y));
  for (std::size_t i = 1; i < ex.regions.size(); ++i)
    for (Vertex v : ex.regions[i - 1].members)
      if (!ex.regions[i].contains(v))
        fail(Errc::BadParams, "exhaustion regions are not nested");
  return run_indexed(static_cast<int>(ex.regions.size()), [&](int i) {
    return kernel_on_region(g, ex.regions[i], x, y, t);
  });
}

}  // namespace

KernelEstimate kernel_estimate(const WeightedGraph& g, const ExhaustionSequence& ex,
                               Vertex x, Vertex y, double t, double tol) {
  auto sweep = kernel_sweep(g, ex, x, y, t);
  KernelEstimate ke;
  ke.source = x;
  ke.target = y;
  ke.time = t;
  for (const auto& rh : sweep) ke.per_region.push_back(rh.value_at_x);
  for (std::size_t i = 1; i < ke.per_region.size(); ++i) {
    if (ke.per_region[i] < ke.per_region[i - 1] - 1e-12)
      fail(Errc::MonotonicityViolation,
           "p_t^n decreased by " + std::to_string(ke.per_region[i - 1] - ke.per_region[i]));
  }
  ke.limit_estimate = ke.per_region.back();
  ke.gap = ke.per_region.size() > 1
               ? ke.per_region.back() - ke.per_region[ke.per_region.size() - 2]
               : 0.0;
  ke.converged = ke.per_region.size() > 1 && std::abs(ke.gap) < tol;
  return ke;
}

MassProbe mass_probe(const WeightedGraph& g, const ExhaustionSequence& ex, Vertex x,
                     double t) {
  auto sweep = kernel_sweep(g, ex, x, x, t);
  MassProbe mp;
  for (const auto& rh : sweep) mp.per_region.push_back(rh.mass);
  for (std::size_t i = 0; i < mp.per_region.size(); ++i) {
    if (mp.per_region[i] > 1.0 + 1e-10)
      fail(Errc::MonotonicityViolation,
           "mass " + std::to_string(mp.per_region[i]) + " exceeds 1");
    if (i && mp.per_region[i] < mp.per_region[i - 1] - 1e-12)
      fail(Errc::MonotonicityViolation, "mass decreased along the exhaustion");
  }
  double u0sup = 1.0 / g.measure(x);
  mp.frontier_contaminated = sweep.back().frontier_sup > 1e-6 * u0sup;

  double last = mp.per_region.back();
  double incr = mp.per_region.size() > 1
                    ? last - mp.per_region[mp.per_region.size() - 2]
                    : last;
  if (last >= 1.0 - 1e-6) {
    mp.sc_evidence = Evidence::Supports;
  } else if (last <= 1.0 - 1e-3 && std::abs(incr) < 0.01 * last) {
    mp.sc_evidence = Evidence::Contradicts;
  } else {
    mp.sc_evidence = Evidence::Inconclusive;
  }
  return mp;
}

FellerProbe feller_probe(const WeightedGraph& g, const ExhaustionSequence& ex,
                         const VertexFunction& u0, double t, const std::vector<int>& annuli) {
  if (ex.regions.empty()) fail(Errc::BadParams, "empty exhaustion");
  if (ex.root < 0) fail(Errc::BadParams, "exhaustion has no root");
  double u0sup = 0.0;
  const SubgraphRegion& first = ex.regions.front();
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!u0.has(v) || u0.values[v] == 0.0) continue;
    if (u0.values[v] < 0.0) fail(Errc::NegativeU0, g.name(v));
    if (!first.interior_contains(v))
      fail(Errc::UnsupportedVertexInU0, g.name(v) + " outside first region");
    u0sup = std::max(u0sup, u0.values[v]);
  }

  const SubgraphRegion& last = ex.regions.back();
  DirichletOperator op = dirichlet_operator(g, last);
  HeatEvolution ev = heat_evolve(g, op, u0, {t});
  MetricView mv = metric_view(g, ex.root);

  int frontier_radius = mv.radius() + 1;
  for (Vertex v : g.frontier_vertices())
    frontier_radius = std::min(frontier_radius, mv.distance[v]);
  int region_radius = 0;
  for (Vertex v : last.members)
    region_radius = std::max(region_radius, mv.distance[v]);
  // Values in the outer half of the evolved region are dragged toward the
  // Dirichlet zero; only the inner half is read as evidence.
  int clean_max = std::min(frontier_radius - 3, region_radius / 2);

  FellerProbe fp;
  fp.radii = annuli;
  double frontier_sup = 0.0;
  for (std::size_t i = 0; i < op.interior.size(); ++i)
    if (g.adjacent_to_frontier(op.interior[i]))
      frontier_sup = std::max(frontier_sup, std::abs(ev.values[0][i]));
  fp.frontier_contaminated = frontier_sup > 1e-6 * u0sup;

  for (int R : annuli) {
    double sup = 0.0;
    bool clean = R <= clean_max;
    if (R < 0 || R > mv.radius()) {
      clean = false;
    } else {
      for (Vertex v : mv.spheres[R]) {
        int i = op.pos[v];
        if (i < 0) {
          clean = false;  // sphere leaves the evolved region
          continue;
        }
        sup = std::max(sup, std::abs(ev.values[0][i]));
        if (!last.interior_contains(v)) clean = false;
      }
    }
    fp.sphere_sup.push_back(sup);
    fp.contaminated.push_back(clean ? 0 : 1);
  }

  // Evidence from the clean annuli only: collapse below noise supports
  // Feller behavior, strong retention across the window contradicts it.
  double first_clean = -1.0, last_clean = -1.0;
  for (std::size_t k = 0; k < fp.radii.size(); ++k) {
    if (fp.contaminated[k] || fp.radii[k] < 1) continue;
    if (first_clean < 0) first_clean = fp.sphere_sup[k];
    last_clean = fp.sphere_sup[k];
  }
  if (last_clean >= 0.0 && u0sup > 0.0) {
    if (last_clean < 1e-6 * u0sup)
      fp.feller_evidence = Evidence::Supports;
    else if (first_clean > 0.0 && last_clean >= 0.1 * first_clean)
      fp.feller_evidence = Evidence::Contradicts;
  }
  return fp;
}

}  // namespace feller
