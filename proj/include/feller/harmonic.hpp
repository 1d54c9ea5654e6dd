#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feller/spectral.hpp"

namespace feller {

/// Exterior lambda-harmonic boundary problem: Delta h = lambda h on X\Omega,
/// h = 1 on the boundary of Omega, h > 0, for a fixed lambda < 0.
struct ExteriorProblem {
  SubgraphRegion omega;
  double lambda = -1.0;
  Vertex root = -1;  // base vertex Omega is built around (profiles, defaults)
};

ExteriorProblem make_exterior_problem(const WeightedGraph& g, std::vector<Vertex> omega,
                                      double lambda, Vertex root);

/// One exhaustion step: h_n = 1 on Omega, 0 on the region boundary, and
/// (Delta - lambda) h_n = 0 on the interior unknowns. Defined nowhere else.
VertexFunction solve_hn(const WeightedGraph& g, const ExteriorProblem& problem,
                        const SubgraphRegion& region);

/// Monotone family h_n and its limit estimate, with residual and per-radius
/// decay diagnostics. Radii beyond trusted_max_radius are reported but
/// carry boundary drag from the Dirichlet zero of the final region.
struct HarmonicSolution {
  std::vector<VertexFunction> per_region;
  VertexFunction limit;
  double residual = 0.0;      // max |Delta h - lambda h| over test vertices
  double residual_rel = 0.0;  // same, scaled by the local equation magnitude
  std::vector<double> decay_profile;                // radius -> sup of limit on S_r
  std::vector<std::vector<double>> region_profiles; // same, per region
  std::vector<int> region_ball_radii;               // max radius per region
  bool converged = false;
  double sup_gap = 0.0;
  int frontier_radius = 0;   // min distance from root to the frontier
  int final_ball_radius = 0; // max radius covered by the final region
  int trusted_max_radius = 0;
  int omega_radius = 0;      // max radius occupied by Omega
  double lambda = -1.0;
};

HarmonicSolution minimal_h(const WeightedGraph& g, const ExteriorProblem& problem,
                           const ExhaustionSequence& ex, double tol);

enum class HarmonicVerdict { FellerEvidence, NonFellerEvidence, Inconclusive };
const char* harmonic_verdict_name(HarmonicVerdict v);

/// Evidence record from the decay profile of h. The decision is evidence at
/// truncation scale, never a certificate; annuli used are recorded.
struct FellerEvidenceRecord {
  HarmonicVerdict verdict = HarmonicVerdict::Inconclusive;
  std::vector<int> radii_used;
  double profile_value = 0.0;  // value the decision was read from
  std::string note;
};

FellerEvidenceRecord feller_verdict_from_h(const HarmonicSolution& sol, double decay_tol);

/// Khasminskii-type reports. Condition failures throw ConditionViolated;
/// the returned record carries the comparison against a computed h and the
/// resulting conclusion, if any.
struct KhasminskiiReport {
  bool conditions_hold = false;
  double h_comparison_margin = 0.0;  // min(v - h) resp. min(h - v)
  bool profile_vanishes = false;
  std::string conclusion;  // "feller-by-subsolution", "non-feller-by-supersolution", ""
};

KhasminskiiReport verify_subsolution(const WeightedGraph& g, const VertexFunction& v,
                                     const ExteriorProblem& problem,
                                     double decay_tol = 1e-3);

KhasminskiiReport verify_supersolution(const WeightedGraph& g, const VertexFunction& v,
                                       const ExteriorProblem& problem, bool sc_evidence,
                                       double decay_tol = 1e-3);

/// max |Delta h - lambda h| over `at`.
double lambda_harmonic_residual(const WeightedGraph& g, const VertexFunction& h,
                                const ExteriorProblem& problem,
                                const std::vector<Vertex>& at);

/// Largest ball radius around root whose region stays clear of the frontier.
int max_safe_ball_radius(const WeightedGraph& g, Vertex root);

/// Doubling-radius ball exhaustion up to the safe truncation radius.
ExhaustionSequence default_exhaustion(const WeightedGraph& g, Vertex root);

}  // namespace feller
