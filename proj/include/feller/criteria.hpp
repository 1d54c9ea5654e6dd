#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feller/model.hpp"

namespace feller {

enum class Applies { Yes, No, InconclusiveAtTruncation };
const char* applies_name(Applies a);

enum class Conclusion { Feller, NotFeller, None };
const char* conclusion_name(Conclusion c);

struct CriterionReport {
  std::string criterion_id;
  Applies applies = Applies::No;
  Conclusion conclusion = Conclusion::None;
  Grade grade = Grade::TruncationScale;
  std::optional<std::string> witness;  // vertex name or radius where it failed
  std::string scope_note;
};

/// Yau/Dodziuk analogue: kappa+(x) - kappa-(x) <= K for every sampled base
/// point and every non-frontier x. The "all x0" hypothesis can only be
/// sampled at a truncation; the scope note records the sample. With
/// require_all_basepoints set, a single-base-point pass yields no
/// conclusion.
CriterionReport uniform_curvature_bound(const WeightedGraph& g, double K,
                                        const std::vector<Vertex>& base_points,
                                        int radius,
                                        bool require_all_basepoints = true);

/// deg bounded => Delta bounded => Feller.
CriterionReport bounded_operator_check(const WeightedGraph& g, double bound);

/// Measure bounded away from zero along every escaping ray (proxy: min of m
/// over spheres does not decay over the truncation).
CriterionReport measure_divergence_check(const WeightedGraph& g, Vertex root = 0);

/// Radial twist function; increments f^(r) = f(r)-f(r+1) must be nonzero
/// (this artifact: strictly positive) beyond the cutoff. Kind is validated
/// against the tabulated range rather than trusted.
struct TwistFunction {
  enum class Kind { Vanishing, BoundedNonvanishing };
  std::vector<double> values;
  Kind kind = Kind::Vanishing;

  static TwistFunction reciprocal(int rmax);           // f(r) = 1/r, vanishing
  static TwistFunction reciprocal_plus_one(int rmax);  // f(r) = 1/r + 1, bounded
  double increment(int r) const { return values[r] - values[r + 1]; }
};

/// kappa+(x) f^(r) - kappa-(x) f^(r-1) >= lambda f(r) for all non-frontier
/// x in S_r, r > R  =>  Feller.
CriterionReport twisted_feller_check(const WeightedGraph& g, Vertex root,
                                     const TwistFunction& f, double lambda, int R);

/// Reversed inequality, bounded non-vanishing twist, stochastically
/// complete graph  =>  not Feller.
CriterionReport twisted_nonfeller_check(const WeightedGraph& g, Vertex root,
                                        const TwistFunction& f, double lambda, int R,
                                        bool sc_evidence);

/// Curvature comparison with a classified model graph outside a finite set.
CriterionReport compare_to_model(const WeightedGraph& g, Vertex root,
                                 const ModelGraph& mg, int R);

}  // namespace feller
