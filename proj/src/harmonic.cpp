#include "feller/harmonic.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "feller/parallel.hpp"

namespace feller {

const char* harmonic_verdict_name(HarmonicVerdict v) {
  switch (v) {
    case HarmonicVerdict::FellerEvidence: return "FellerEvidence";
    case HarmonicVerdict::NonFellerEvidence: return "NonFellerEvidence";
    case HarmonicVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ExteriorProblem make_exterior_problem(const WeightedGraph& g, std::vector<Vertex> omega,
                                      double lambda, Vertex root) {
  if (!(lambda < 0.0)) fail(Errc::BadParams, "lambda must be negative");
  if (omega.empty()) fail(Errc::BadParams, "Omega is empty");
  ExteriorProblem p;
  p.omega = make_region(g, std::move(omega));
  p.lambda = lambda;
  p.root = root >= 0 ? root : p.omega.members.front();
  return p;
}

VertexFunction solve_hn(const WeightedGraph& g, const ExteriorProblem& problem,
                        const SubgraphRegion& region) {
  if (!(problem.lambda < 0.0)) fail(Errc::BadParams, "lambda must be negative");
  for (Vertex v : problem.omega.members)
    if (!region.interior_contains(v))
      fail(Errc::OmegaNotInsideRegion, g.name(v) + " not in the region interior");

  // Unknowns: interior of the region minus Omega.
  std::vector<Vertex> unknowns;
  std::vector<int> pos(g.size(), -1);
  for (Vertex v : region.interior) {
    if (problem.omega.contains(v)) continue;
    pos[v] = static_cast<int>(unknowns.size());
    unknowns.push_back(v);
  }

  VertexFunction h = VertexFunction::undefined(g.size());
  for (Vertex v : problem.omega.members) h.set(v, 1.0);
  for (Vertex v : region.boundary)
    if (!problem.omega.contains(v)) h.set(v, 0.0);
  if (unknowns.empty()) return h;

  // Rows multiplied by m(x): (sum_y b(x,y) - lambda m(x)) h(x)
  //   - sum_{y unknown} b(x,y) h(y) = sum_{y in Omega} b(x,y).
  // Symmetric and strictly diagonally dominant for lambda < 0.
  const int n = static_cast<int>(unknowns.size());
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    Vertex x = unknowns[i];
    double diag = -problem.lambda * g.measure(x);
    for (auto [y, b] : g.neighbors(x)) {
      diag += b;
      int j = pos[y];
      if (j >= 0) {
        trips.emplace_back(i, j, -b);
      } else if (problem.omega.contains(y)) {
        rhs[i] += b;
      }
      // region-boundary neighbors contribute 0
    }
    trips.emplace_back(i, i, diag);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) fail(Errc::SolverBreakdown, "LDLT factorization failed");
  Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success) fail(Errc::SolverBreakdown, "LDLT solve failed");

  double rnorm = (A * x - rhs).norm();
  double scale = std::max(rhs.norm(), 1e-300);
  if (rnorm > 1e-10 * std::max(1.0, scale))
    fail(Errc::SolverBreakdown, "relative residual " + std::to_string(rnorm / scale));

  for (int i = 0; i < n; ++i) {
    // Elliptic maximum principle: solutions live strictly inside (0,1).
    if (x[i] < -1e-12 || x[i] > 1.0 + 1e-12)
      fail(Errc::SolverBreakdown,
           "maximum principle violated at " + g.name(unknowns[i]) + ": " +
               std::to_string(x[i]));
    h.set(unknowns[i], x[i]);
  }
  return h;
}

namespace {

std::vector<double> sphere_sup_profile(const MetricView& mv, const VertexFunction& f,
                                       int max_radius) {
  std::vector<double> prof(max_radius + 1, 0.0);
  for (int r = 0; r <= max_radius; ++r) {
    double sup = 0.0;
    bool any = false;
    for (Vertex v : mv.spheres[r]) {
      if (!f.has(v)) continue;
      sup = std::max(sup, f.values[v]);
      any = true;
    }
    prof[r] = any ? sup : 0.0;
  }
  return prof;
}

}  // namespace

HarmonicSolution minimal_h(const WeightedGraph& g, const ExteriorProblem& problem,
                           const ExhaustionSequence& ex, double tol) {
  if (ex.regions.empty()) fail(Errc::BadParams, "empty exhaustion");
  if (ex.root < 0) fail(Errc::BadParams, "exhaustion has no root");

  HarmonicSolution sol;
  sol.lambda = problem.lambda;
  sol.per_region = run_indexed(static_cast<int>(ex.regions.size()), [&](int i) {
    return solve_hn(g, problem, ex.regions[i]);
  });

  // Monotone in the exhaustion: h_n <= h_{n+1} wherever both are defined.
  for (std::size_t i = 1; i < sol.per_region.size(); ++i) {
    const auto& a = sol.per_region[i - 1];
    const auto& b = sol.per_region[i];
    for (Vertex v = 0; v < g.size(); ++v) {
      if (!a.has(v) || !b.has(v)) continue;
      if (b.values[v] < a.values[v] - 1e-12)
        fail(Errc::MonotonicityViolation,
             "h_n decreased at " + g.name(v) + " between regions " +
                 std::to_string(i - 1) + " and " + std::to_string(i));
    }
  }

  sol.limit = sol.per_region.back();
  sol.sup_gap = 0.0;
  if (sol.per_region.size() > 1) {
    const auto& prev = sol.per_region[sol.per_region.size() - 2];
    for (Vertex v = 0; v < g.size(); ++v)
      if (prev.has(v) && sol.limit.has(v))
        sol.sup_gap = std::max(sol.sup_gap, std::abs(sol.limit.values[v] - prev.values[v]));
    sol.converged = sol.sup_gap < tol;
  }

  MetricView mv = metric_view(g, ex.root);
  sol.frontier_radius = mv.radius() + 1;
  for (Vertex v : g.frontier_vertices())
    sol.frontier_radius = std::min(sol.frontier_radius, mv.distance[v]);
  sol.omega_radius = 0;
  for (Vertex v : problem.omega.members)
    sol.omega_radius = std::max(sol.omega_radius, mv.distance[v]);

  const SubgraphRegion& last = ex.regions.back();
  for (const auto& reg : ex.regions) {
    int rr = 0;
    for (Vertex v : reg.members) rr = std::max(rr, mv.distance[v]);
    sol.region_ball_radii.push_back(rr);
  }
  sol.final_ball_radius = sol.region_ball_radii.back();
  sol.trusted_max_radius =
      std::min(sol.frontier_radius - 3, sol.final_ball_radius / 2);

  for (const auto& h : sol.per_region)
    sol.region_profiles.push_back(sphere_sup_profile(mv, h, sol.final_ball_radius));
  sol.decay_profile = sol.region_profiles.back();

  // Residual away from the cut, over the final region's solved exterior.
  std::vector<Vertex> at;
  for (Vertex v : last.interior) {
    if (problem.omega.contains(v)) continue;
    if (g.is_frontier(v) || g.adjacent_to_frontier(v)) continue;
    at.push_back(v);
  }
  if (!at.empty()) {
    VertexFunction lap = apply_formal_laplacian(g, sol.limit, at);
    for (Vertex x : at) {
      double r = std::abs(lap.values[x] - problem.lambda * sol.limit.values[x]);
      double scale = (g.weighted_degree(x) - problem.lambda) *
                     std::max(std::abs(sol.limit.values[x]), 1e-300);
      sol.residual = std::max(sol.residual, r);
      sol.residual_rel = std::max(sol.residual_rel, r / std::max(scale, 1e-300));
    }
  }
  return sol;
}

namespace {

// Index of the comparison region for convergence reading: the largest
// earlier region whose ball radius is at most 3/4 of the final one.
// Near-equal regions would agree everywhere without implying convergence.
int comparison_region(const HarmonicSolution& sol) {
  if (sol.region_profiles.size() < 2) return -1;
  int last = sol.region_ball_radii.back();
  int pick = -1;
  for (std::size_t i = 0; i + 1 < sol.region_ball_radii.size(); ++i)
    if (4 * sol.region_ball_radii[i] <= 3 * last) pick = static_cast<int>(i);
  return pick;
}

// Contiguous annuli beyond Omega where the final solve agrees with the
// comparison region to 1% relative; only there can small profile values be
// read as decay rather than boundary drag.
std::vector<int> agreement_annuli(const HarmonicSolution& sol, int prev_index) {
  const auto& prof = sol.decay_profile;
  const auto& prev = sol.region_profiles[prev_index];
  int agree_cap = std::min<int>(sol.frontier_radius - 3,
                                static_cast<int>(prof.size()) - 1);
  std::vector<int> agreed;
  for (int r = sol.omega_radius + 1; r <= agree_cap; ++r) {
    if (r >= static_cast<int>(prev.size())) break;
    if (std::abs(prof[r] - prev[r]) <= std::max(0.01 * prof[r], 1e-15))
      agreed.push_back(r);
    else
      break;
  }
  return agreed;
}

}  // namespace

FellerEvidenceRecord feller_verdict_from_h(const HarmonicSolution& sol, double decay_tol) {
  if (!(decay_tol > 0.0)) fail(Errc::BadParams, "decay_tol must be positive");
  int prev_index = comparison_region(sol);
  if (prev_index < 0)
    fail(Errc::InsufficientAnnuli,
         "no exhaustion region well inside the final one to compare against");

  const auto& prof = sol.decay_profile;
  std::vector<int> agreed = agreement_annuli(sol, prev_index);
  if (static_cast<int>(agreed.size()) < 3)
    fail(Errc::InsufficientAnnuli,
         "only " + std::to_string(agreed.size()) +
             " exhaustion-converged annuli clear of the frontier");

  FellerEvidenceRecord rec;
  bool decays = prof[agreed.back()] < decay_tol;

  int w = sol.trusted_max_radius;
  bool plateau = false;
  if (w - 2 > sol.omega_radius && w < static_cast<int>(prof.size()) && prof[w] > 0.0) {
    double rel = std::abs(prof[w] - prof[w - 2]) / prof[w];
    plateau = rel < 0.01 && prof[w] > decay_tol;
  }

  if (decays && !plateau) {
    rec.verdict = HarmonicVerdict::FellerEvidence;
    rec.radii_used = agreed;
    rec.profile_value = prof[agreed.back()];
    rec.note = "profile below decay tolerance on exhaustion-converged annuli";
  } else if (plateau && !decays) {
    rec.verdict = HarmonicVerdict::NonFellerEvidence;
    rec.radii_used = {w - 2, w - 1, w};
    rec.profile_value = prof[w];
    rec.note = "profile stabilized above decay tolerance";
  } else {
    rec.verdict = HarmonicVerdict::Inconclusive;
    rec.radii_used = agreed;
    rec.profile_value = prof[agreed.back()];
    rec.note = decays ? "decay and plateau signals conflict" : "no decisive signal";
  }
  return rec;
}

namespace {

struct ConditionCheck {
  const WeightedGraph& g;
  const ExteriorProblem& problem;

  // Vertices where the formal Laplacian is trustworthy and the exterior
  // equation applies.
  std::vector<Vertex> checkable_exterior(const VertexFunction& v) const {
    std::vector<Vertex> at;
    for (Vertex x = 0; x < g.size(); ++x) {
      if (problem.omega.contains(x)) continue;
      if (g.is_frontier(x) || g.adjacent_to_frontier(x)) continue;
      if (!v.has(x)) continue;
      bool ok = true;
      for (auto [y, b] : g.neighbors(x)) {
        (void)b;
        if (!v.has(y)) { ok = false; break; }
      }
      if (ok) at.push_back(x);
    }
    return at;
  }

  void require_positive(const VertexFunction& v) const {
    for (Vertex x = 0; x < g.size(); ++x) {
      if (g.is_frontier(x)) continue;
      if (!v.has(x)) fail(Errc::MissingValue, "v undefined at " + g.name(x));
      if (!(v.values[x] > 0.0))
        fail(Errc::ConditionViolated, "positivity fails at " + g.name(x));
    }
  }
};

double compare_against_h(const WeightedGraph& g, const ExteriorProblem& problem,
                         const VertexFunction& v, bool v_above) {
  ExhaustionSequence ex = default_exhaustion(g, problem.root);
  HarmonicSolution sol = minimal_h(g, problem, ex, 1e-8);
  const SubgraphRegion& last = ex.regions.back();

  // v >= h_n certifies v >= h everywhere (h_n increases to h). The reverse
  // comparison h >= v is only readable where the exhaustion has stabilized;
  // deeper annuli are dominated by the Dirichlet zero of the last region.
  int max_radius = std::numeric_limits<int>::max();
  if (!v_above) {
    int prev_index = comparison_region(sol);
    max_radius = sol.omega_radius;
    if (prev_index >= 0) {
      std::vector<int> agreed = agreement_annuli(sol, prev_index);
      if (!agreed.empty()) max_radius = agreed.back();
    }
  }

  MetricView mv = metric_view(g, problem.root);
  double margin = std::numeric_limits<double>::infinity();
  for (Vertex x : last.interior) {
    if (problem.omega.contains(x)) continue;
    if (!v.has(x) || !sol.limit.has(x)) continue;
    if (mv.distance[x] > max_radius) continue;
    double d = v_above ? v.values[x] - sol.limit.values[x]
                       : sol.limit.values[x] - v.values[x];
    margin = std::min(margin, d);
  }
  return margin;
}

bool profile_vanishes(const WeightedGraph& g, const VertexFunction& v, Vertex root,
                      double decay_tol) {
  MetricView mv = metric_view(g, root);
  int frontier_radius = mv.radius() + 1;
  for (Vertex fv : g.frontier_vertices())
    frontier_radius = std::min(frontier_radius, mv.distance[fv]);
  int last = std::min(mv.radius(), frontier_radius - 1);
  if (last < 1) return false;
  double sup = 0.0;
  for (Vertex x : mv.spheres[last])
    if (v.has(x)) sup = std::max(sup, v.values[x]);
  return sup < decay_tol;
}

}  // namespace

KhasminskiiReport verify_subsolution(const WeightedGraph& g, const VertexFunction& v,
                                     const ExteriorProblem& problem, double decay_tol) {
  ConditionCheck cc{g, problem};
  cc.require_positive(v);
  for (Vertex x : problem.omega.boundary) {
    if (!v.has(x)) fail(Errc::MissingValue, "v undefined on boundary of Omega");
    if (v.values[x] < 1.0 - 1e-12)
      fail(Errc::ConditionViolated,
           "v < 1 on the Omega boundary at " + g.name(x));
  }
  std::vector<Vertex> at = cc.checkable_exterior(v);
  VertexFunction lap = apply_formal_laplacian(g, v, at);
  for (Vertex x : at) {
    if (lap.values[x] < problem.lambda * v.values[x] - 1e-10)
      fail(Errc::ConditionViolated,
           "Delta v >= lambda v fails at " + g.name(x));
  }

  KhasminskiiReport rep;
  rep.conditions_hold = true;
  rep.h_comparison_margin = compare_against_h(g, problem, v, /*v_above=*/true);
  rep.profile_vanishes = profile_vanishes(g, v, problem.root, decay_tol);
  rep.conclusion = rep.profile_vanishes ? "feller-by-subsolution" : "";
  return rep;
}

KhasminskiiReport verify_supersolution(const WeightedGraph& g, const VertexFunction& v,
                                       const ExteriorProblem& problem, bool sc_evidence,
                                       double decay_tol) {
  if (!sc_evidence)
    fail(Errc::StochasticCompletenessNotEstablished,
         "supersolution test requires stochastic completeness evidence");
  ConditionCheck cc{g, problem};
  cc.require_positive(v);
  for (Vertex x : problem.omega.boundary) {
    if (!v.has(x)) fail(Errc::MissingValue, "v undefined on boundary of Omega");
    if (v.values[x] > 1.0 + 1e-12)
      fail(Errc::ConditionViolated, "v > 1 on the Omega boundary at " + g.name(x));
  }
  std::vector<Vertex> at = cc.checkable_exterior(v);
  VertexFunction lap = apply_formal_laplacian(g, v, at);
  for (Vertex x : at) {
    if (lap.values[x] > problem.lambda * v.values[x] + 1e-10)
      fail(Errc::ConditionViolated, "Delta v <= lambda v fails at " + g.name(x));
  }

  KhasminskiiReport rep;
  rep.conditions_hold = true;
  rep.h_comparison_margin = compare_against_h(g, problem, v, /*v_above=*/false);
  rep.profile_vanishes = profile_vanishes(g, v, problem.root, decay_tol);
  rep.conclusion = rep.profile_vanishes ? "" : "non-feller-by-supersolution";
  return rep;
}

double lambda_harmonic_residual(const WeightedGraph& g, const VertexFunction& h,
                                const ExteriorProblem& problem,
                                const std::vector<Vertex>& at) {
  VertexFunction lap = apply_formal_laplacian(g, h, at);
  double worst = 0.0;
  for (Vertex x : at)
    worst = std::max(worst, std::abs(lap.values[x] - problem.lambda * h.at(x)));
  return worst;
}

int max_safe_ball_radius(const WeightedGraph& g, Vertex root) {
  MetricView mv = metric_view(g, root);
  int frontier_radius = mv.radius() + 1;
  for (Vertex v : g.frontier_vertices())
    frontier_radius = std::min(frontier_radius, mv.distance[v]);
  return std::min(mv.radius(), frontier_radius - 2);
}

ExhaustionSequence default_exhaustion(const WeightedGraph& g, Vertex root) {
  int rmax = max_safe_ball_radius(g, root);
  if (rmax < 2) fail(Errc::RadiusExceedsTruncation, "truncation too small to exhaust");
  std::vector<int> radii;
  for (int r = 4; r < rmax; r *= 2) radii.push_back(r);
  // a 0.7 rmax region gives the convergence comparison a qualifying partner
  int penultimate = (7 * rmax) / 10;
  if (penultimate > 2 && (radii.empty() || radii.back() < penultimate))
    radii.push_back(penultimate);
  if (radii.empty() || radii.back() != rmax) radii.push_back(rmax);
  if (radii.size() == 1 && rmax > 2) radii.insert(radii.begin(), rmax / 2);
  return ball_exhaustion(g, root, radii);
}

}  // namespace feller
