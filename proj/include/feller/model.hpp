#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feller/graph.hpp"

namespace feller {

enum class SeriesId { InvBoundary, TailMeasureOverBoundary, BallMeasureOverBoundary, SphereMeasure };
const char* series_id_name(SeriesId id);
std::optional<SeriesId> parse_series_id(const std::string& s);

/// User-asserted asymptotics of a positive sequence: terms ~ c r^{-exponent}
/// (power) or ~ c e^{-exponent r} (exp; positive exponent means decay).
struct TailAnnotation {
  enum class Kind { Power, Exp };
  Kind kind = Kind::Power;
  double exponent = 0.0;
};

/// Radial data of a weakly spherically symmetric graph truncated at
/// `length` spheres (r = 0..length-1). Invariants: dB_r = kt+(r) m(S_r) and
/// kt+(r) m(S_r) = kt-(r+1) m(S_{r+1}).
struct ModelGraph {
  std::vector<double> outer_curv;     // kt+(r)
  std::vector<double> inner_curv;     // kt-(r), kt-(0) = 0
  std::vector<double> sphere_measure; // m(S_r)
  std::vector<double> boundary_area;  // dB_r
  int length = 0;
  std::map<SeriesId, TailAnnotation> tails;
};

ModelGraph model_from_radial(std::vector<double> outer_curv,
                             std::vector<double> sphere_measure,
                             std::map<SeriesId, TailAnnotation> tails = {});

/// Radial reduction of a full graph, if curvature is constant on every
/// sphere (relative spread < 1e-10). On failure returns nullopt and the
/// first violating sphere.
std::optional<ModelGraph> detect_model(const WeightedGraph& g, Vertex root,
                                       int* first_violating_sphere = nullptr);

enum class SeriesStatus {
  ConvergentCertified,
  DivergentCertified,
  ConvergentHeuristic,
  DivergentHeuristic,
  Inconclusive,
};
const char* series_status_name(SeriesStatus s);

struct SeriesVerdict {
  SeriesId id = SeriesId::InvBoundary;
  SeriesStatus status = SeriesStatus::Inconclusive;
  std::vector<double> partial_sums;
  std::string basis;
  double fitted_slope = 0.0;  // log-log slope when the heuristic ran

  bool convergent() const {
    return status == SeriesStatus::ConvergentCertified ||
           status == SeriesStatus::ConvergentHeuristic;
  }
  bool divergent() const {
    return status == SeriesStatus::DivergentCertified ||
           status == SeriesStatus::DivergentHeuristic;
  }
  bool certified() const {
    return status == SeriesStatus::ConvergentCertified ||
           status == SeriesStatus::DivergentCertified;
  }
};

/// Convergence verdict for a positive series from finitely many terms.
/// With a tail annotation the verdict is certified; without one a log-log
/// slope fit over the last half yields a heuristic verdict or Inconclusive.
/// Nondecreasing terms certify divergence outright.
SeriesVerdict series_verdict(SeriesId id, const std::vector<double>& terms,
                             std::optional<TailAnnotation> tail);

enum class Grade { Certified, Heuristic, TruncationScale };
const char* grade_name(Grade g);

/// m(B_r^c): finite value from the measure tail annotation, infinity when
/// the sphere measures are certifiably non-summable, nullopt when unknown.
struct TailMeasure {
  bool known = false;
  bool finite = false;
  std::vector<double> values;  // per radius, only when finite
};
TailMeasure tail_measure(const ModelGraph& mg);

struct FellerClassification {
  bool feller = false;
  int case_id = 0;  // 1: sum 1/dB < inf; 2: both series diverge; 0: not Feller
  Grade grade = Grade::Heuristic;
  SeriesVerdict inv_boundary;
  SeriesVerdict tail_series;
};
FellerClassification classify_feller(const ModelGraph& mg);

struct SCClassification {
  bool complete = false;
  Grade grade = Grade::Heuristic;
  SeriesVerdict series;
};
SCClassification classify_stochastic_completeness(const ModelGraph& mg);

struct TransienceClassification {
  bool transient = false;
  Grade grade = Grade::Heuristic;
  SeriesVerdict series;
};
TransienceClassification classify_transience(const ModelGraph& mg);

/// Tridiagonal solve of the radial exterior problem with h(0)=1, h(n)=0:
/// kt+(r)(h(r)-h(r+1)) + kt-(r)(h(r)-h(r-1)) = lambda h(r), 1 <= r <= n-1.
/// f(r) = dB_r (h(r)-h(r+1)) together with the residual of the identity
/// f(r)-f(r-1) = lambda h(r) m(S_r).
struct RadialSolve {
  std::vector<double> h;  // 0..n
  std::vector<double> f;  // 0..n-1
  double recursion_residual = 0.0;
};
RadialSolve radial_h(const ModelGraph& mg, double lambda, int n);

/// Limit profile from solves at n and 2n (n = (length-1)/2), trusted on
/// r <= n/2. The finite-truncation form of the f-bracket is checked: with
/// M(r) = sum_{i=r+1}^{2n-1} m(S_i),
///   f(2n-1) - lambda h(2n-1) M(r) <= f(r) <= f(2n-1) - lambda h(r+1) M(r).
struct RadialLimit {
  int solve_n = 0;
  std::vector<double> limit_profile;  // r = 0..trusted_max
  int trusted_max = 0;
  double lim_estimate = 0.0;  // profile value at the last trusted radius
  double sup_diff = 0.0;      // max |h_n - h_2n| on the trusted range
  bool plateau = false;
  double plateau_rel_change = 0.0;
  double bracket_violation = 0.0;
  bool f_positive_decreasing = false;
  double recursion_residual = 0.0;
};
RadialLimit radial_limit_h(const ModelGraph& mg, double lambda, double tol);

/// The increasing lambda-harmonic radial function with v(0)=1 built by the
/// forward recurrence; bounded exactly when the model graph is
/// stochastically incomplete.
std::vector<double> increasing_radial_solution(const ModelGraph& mg, double lambda);

}  // namespace feller
