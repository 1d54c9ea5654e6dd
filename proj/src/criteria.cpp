#include "feller/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace feller {

const char* applies_name(Applies a) {
  switch (a) {
    case Applies::Yes: return "yes";
    case Applies::No: return "no";
    case Applies::InconclusiveAtTruncation: return "inconclusive-at-truncation";
  }
  return "?";
}

const char* conclusion_name(Conclusion c) {
  switch (c) {
    case Conclusion::Feller: return "Feller";
    case Conclusion::NotFeller: return "NotFeller";
    case Conclusion::None: return "none";
  }
  return "?";
}

CriterionReport uniform_curvature_bound(const WeightedGraph& g, double K,
                                        const std::vector<Vertex>& base_points,
                                        int radius, bool require_all_basepoints) {
  if (base_points.empty()) fail(Errc::BadParams, "base_points must be nonempty");
  CriterionReport rep;
  rep.criterion_id = "uniform-curvature-bound";
  rep.applies = Applies::Yes;
  for (Vertex x0 : base_points) {
    CurvatureField cf = curvature_field(g, x0);
    for (Vertex x = 0; x < g.size(); ++x) {
      if (g.is_frontier(x)) continue;
      if (cf.outer[x] - cf.inner[x] > K + 1e-12) {
        rep.applies = Applies::No;
        rep.witness = g.name(x) + " (base " + g.name(x0) + ")";
        break;
      }
    }
    if (rep.applies == Applies::No) break;
  }

  std::ostringstream note;
  note << "base points sampled: " << base_points.size()
       << " of a truncation; the hypothesis quantifies over all x0; radius scope "
       << radius;
  rep.scope_note = note.str();
  if (rep.applies == Applies::Yes) {
    if (require_all_basepoints && base_points.size() == 1) {
      rep.conclusion = Conclusion::None;
      rep.scope_note += "; single base point cannot support the all-x0 hypothesis";
    } else {
      rep.conclusion = Conclusion::Feller;
    }
  }
  rep.grade = Grade::TruncationScale;
  return rep;
}

CriterionReport bounded_operator_check(const WeightedGraph& g, double bound) {
  CriterionReport rep;
  rep.criterion_id = "bounded-operator";
  rep.applies = Applies::Yes;
  double sup = 0.0;
  for (Vertex x = 0; x < g.size(); ++x) {
    if (g.is_frontier(x)) continue;
    double d = g.weighted_degree(x);
    sup = std::max(sup, d);
    if (d > bound + 1e-12) {
      rep.applies = Applies::No;
      rep.witness = g.name(x);
      break;
    }
  }
  if (rep.applies == Applies::Yes) rep.conclusion = Conclusion::Feller;
  std::ostringstream note;
  note << "sup deg over non-frontier vertices"
       << (rep.applies == Applies::Yes ? " = " + std::to_string(sup) : " exceeds bound")
       << "; bound " << bound;
  rep.scope_note = note.str();
  rep.grade = Grade::TruncationScale;
  return rep;
}

CriterionReport measure_divergence_check(const WeightedGraph& g, Vertex root) {
  CriterionReport rep;
  rep.criterion_id = "measure-divergence";
  MetricView mv = metric_view(g, root);
  int rmax = mv.radius();
  for (Vertex v : g.frontier_vertices()) rmax = std::min(rmax, mv.distance[v] - 1);

  std::vector<double> minm(rmax + 1, 0.0);
  std::vector<Vertex> argmin(rmax + 1, root);
  for (int r = 0; r <= rmax; ++r) {
    double lo = std::numeric_limits<double>::infinity();
    for (Vertex v : mv.spheres[r])
      if (g.measure(v) < lo) { lo = g.measure(v); argmin[r] = v; }
    minm[r] = lo;
  }

  // Proxy for "every escaping sequence has non-summable measure": the
  // per-sphere minimum must not decay across the truncation.
  double head = 0.0, tail = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= rmax / 2; ++r) head = std::max(head, minm[r]);
  int worst_r = rmax;
  for (int r = rmax / 2; r <= rmax; ++r)
    if (minm[r] < tail) { tail = minm[r]; worst_r = r; }

  if (tail >= 0.5 * head) {
    rep.applies = Applies::Yes;
    rep.conclusion = Conclusion::Feller;
    rep.scope_note = "min sphere measure stays >= " + std::to_string(tail) +
                     " out to radius " + std::to_string(rmax);
  } else {
    rep.applies = Applies::InconclusiveAtTruncation;
    rep.witness = g.name(argmin[worst_r]);
    rep.scope_note = "sphere-min measure decays along a ray (to " +
                     std::to_string(tail) + " at radius " + std::to_string(worst_r) +
                     "); divergence cannot be certified at a truncation";
  }
  rep.grade = Grade::TruncationScale;
  return rep;
}

TwistFunction TwistFunction::reciprocal(int rmax) {
  TwistFunction f;
  f.kind = Kind::Vanishing;
  f.values.resize(rmax + 1);
  f.values[0] = 2.0;  // placeholder, never used for r > R >= 1
  for (int r = 1; r <= rmax; ++r) f.values[r] = 1.0 / r;
  return f;
}

TwistFunction TwistFunction::reciprocal_plus_one(int rmax) {
  TwistFunction f;
  f.kind = Kind::BoundedNonvanishing;
  f.values.resize(rmax + 1);
  f.values[0] = 3.0;  // placeholder
  for (int r = 1; r <= rmax; ++r) f.values[r] = 1.0 / r + 1.0;
  return f;
}

namespace {

// Range checks shared by both twisted criteria. The artifact restricts to
// strictly decreasing twists (f^ > 0); general sign handling is out of
// scope.
void validate_twist(const TwistFunction& f, int R, int rmax_needed, bool want_vanishing) {
  if (R < 1) fail(Errc::BadParams, "cutoff R must be >= 1");
  if (static_cast<int>(f.values.size()) < rmax_needed + 2)
    fail(Errc::BadParams, "twist table too short for the truncation");
  bool is_vanishing = f.kind == TwistFunction::Kind::Vanishing;
  if (is_vanishing != want_vanishing)
    fail(Errc::WrongTwistKind, want_vanishing ? "need a vanishing twist"
                                              : "need a bounded non-vanishing twist");
  for (int r = R; r <= rmax_needed; ++r) {
    if (!(f.values[r] > 0.0)) fail(Errc::WrongTwistKind, "twist must be positive");
    if (!(f.increment(r) > 0.0))
      fail(Errc::WrongTwistKind,
           "twist increment not positive at r=" + std::to_string(r));
  }
  // Kind consistency over the tabulated range.
  double ratio = f.values[rmax_needed] / f.values[std::min(R + 1, rmax_needed)];
  if (want_vanishing && ratio > 0.5)
    fail(Errc::WrongTwistKind, "declared vanishing but does not decay on range");
  if (!want_vanishing && ratio <= 0.5)
    fail(Errc::WrongTwistKind, "declared non-vanishing but decays on range");
}

struct TwistScan {
  bool holds = true;
  Vertex witness = -1;
  int witness_radius = -1;
  int checked_rmax = 0;
};

// Verifies sign * (kappa+ f^(r) - kappa- f^(r-1) - lambda f(r)) >= -slack
// for all non-frontier x in S_r, R < r <= usable radius.
TwistScan scan_twist(const WeightedGraph& g, Vertex root, const TwistFunction& f,
                     double lambda, int R, double sign) {
  MetricView mv = metric_view(g, root);
  CurvatureField cf = curvature_field(g, mv);
  int rmax = mv.radius();
  for (Vertex v : g.frontier_vertices()) rmax = std::min(rmax, mv.distance[v] - 1);
  rmax = std::min(rmax, static_cast<int>(f.values.size()) - 2);

  TwistScan scan;
  scan.checked_rmax = rmax;
  for (int r = R + 1; r <= rmax && scan.holds; ++r) {
    double fr = f.values[r];
    double inc = f.increment(r);
    double inc_prev = f.increment(r - 1);
    for (Vertex x : mv.spheres[r]) {
      if (g.is_frontier(x)) continue;
      double lhs = cf.outer[x] * inc - cf.inner[x] * inc_prev;
      double rhs = lambda * fr;
      double slack = 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
      if (sign * (lhs - rhs) < -slack) {
        scan.holds = false;
        scan.witness = x;
        scan.witness_radius = r;
        break;
      }
    }
  }
  return scan;
}

std::string twist_scope(const TwistScan& scan, int R, double lambda) {
  std::ostringstream note;
  note << "checked non-frontier spheres r in (" << R << ", " << scan.checked_rmax
       << "], lambda " << lambda << ", multiplied-out form";
  return note.str();
}

}  // namespace

CriterionReport twisted_feller_check(const WeightedGraph& g, Vertex root,
                                     const TwistFunction& f, double lambda, int R) {
  if (!(lambda < 0.0)) fail(Errc::BadParams, "lambda must be negative");
  MetricView mv = metric_view(g, root);
  validate_twist(f, R, std::min(mv.radius(), static_cast<int>(f.values.size()) - 2),
                 /*want_vanishing=*/true);
  TwistScan scan = scan_twist(g, root, f, lambda, R, +1.0);

  CriterionReport rep;
  rep.criterion_id = "twisted-feller";
  rep.applies = scan.holds ? Applies::Yes : Applies::No;
  if (scan.holds) rep.conclusion = Conclusion::Feller;
  else rep.witness = g.name(scan.witness) + " at radius " + std::to_string(scan.witness_radius);
  rep.scope_note = twist_scope(scan, R, lambda);
  rep.grade = Grade::TruncationScale;
  return rep;
}

CriterionReport twisted_nonfeller_check(const WeightedGraph& g, Vertex root,
                                        const TwistFunction& f, double lambda, int R,
                                        bool sc_evidence) {
  if (!(lambda < 0.0)) fail(Errc::BadParams, "lambda must be negative");
  if (!sc_evidence)
    fail(Errc::StochasticCompletenessNotEstablished,
         "the non-Feller twist criterion requires stochastic completeness");
  MetricView mv = metric_view(g, root);
  validate_twist(f, R, std::min(mv.radius(), static_cast<int>(f.values.size()) - 2),
                 /*want_vanishing=*/false);
  TwistScan scan = scan_twist(g, root, f, lambda, R, -1.0);

  CriterionReport rep;
  rep.criterion_id = "twisted-nonfeller";
  rep.applies = scan.holds ? Applies::Yes : Applies::No;
  if (scan.holds) rep.conclusion = Conclusion::NotFeller;
  else rep.witness = g.name(scan.witness) + " at radius " + std::to_string(scan.witness_radius);
  rep.scope_note = twist_scope(scan, R, lambda) + "; conditional on stochastic completeness";
  rep.grade = Grade::TruncationScale;
  return rep;
}

CriterionReport compare_to_model(const WeightedGraph& g, Vertex root,
                                 const ModelGraph& mg, int R) {
  FellerClassification cls;
  try {
    cls = classify_feller(mg);
  } catch (const Error& e) {
    if (e.code() == Errc::InconclusiveSeries)
      fail(Errc::ModelNotClassified, e.what());
    throw;
  }

  MetricView mv = metric_view(g, root);
  CurvatureField cf = curvature_field(g, mv);
  int rmax = mv.radius();
  for (Vertex v : g.frontier_vertices()) rmax = std::min(rmax, mv.distance[v] - 1);
  rmax = std::min(rmax, mg.length - 1);

  bool stronger = true, weaker = true;
  Vertex s_wit = -1, w_wit = -1;
  const double tol = 1e-12;
  for (int r = R; r <= rmax; ++r) {
    for (Vertex x : mv.spheres[r]) {
      if (g.is_frontier(x)) continue;
      double kp = cf.outer[x], km = cf.inner[x];
      double mkp = mg.outer_curv[r], mkm = mg.inner_curv[r];
      if (stronger && (kp < mkp * (1.0 - tol) - tol || km > mkm * (1.0 + tol) + tol)) {
        stronger = false;
        s_wit = x;
      }
      if (weaker && (kp > mkp * (1.0 + tol) + tol || km < mkm * (1.0 - tol) - tol)) {
        weaker = false;
        w_wit = x;
      }
    }
  }

  CriterionReport rep;
  rep.criterion_id = "compare-to-model";
  std::ostringstream note;
  note << "compared on spheres r in [" << R << ", " << rmax << "]; model is "
       << (cls.feller ? "Feller" : "NotFeller") << " (" << grade_name(cls.grade) << ")";
  if (stronger && cls.feller) {
    rep.applies = Applies::Yes;
    rep.conclusion = Conclusion::Feller;
    note << "; curvature growth stronger than the model";
  } else if (weaker && !cls.feller) {
    rep.applies = Applies::Yes;
    rep.conclusion = Conclusion::NotFeller;
    note << "; curvature growth weaker than the model";
  } else {
    rep.applies = Applies::No;
    if (!stronger && !weaker) {
      note << "; incomparable";
      rep.witness = g.name(s_wit != -1 ? s_wit : w_wit);
    } else {
      note << "; comparison direction does not match the model's class";
    }
  }
  rep.grade = cls.grade == Grade::Certified ? Grade::TruncationScale : cls.grade;
  rep.scope_note = note.str();
  return rep;
}

}  // namespace feller
