#include "feller/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace feller {

const char* series_id_name(SeriesId id) {
  switch (id) {
    case SeriesId::InvBoundary: return "inv_boundary";
    case SeriesId::TailMeasureOverBoundary: return "tail_measure_over_boundary";
    case SeriesId::BallMeasureOverBoundary: return "ball_measure_over_boundary";
    case SeriesId::SphereMeasure: return "sphere_measure";
  }
  return "?";
}

std::optional<SeriesId> parse_series_id(const std::string& s) {
  if (s == "inv_boundary") return SeriesId::InvBoundary;
  if (s == "tail_measure_over_boundary") return SeriesId::TailMeasureOverBoundary;
  if (s == "ball_measure_over_boundary") return SeriesId::BallMeasureOverBoundary;
  if (s == "sphere_measure") return SeriesId::SphereMeasure;
  return std::nullopt;
}

const char* series_status_name(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::ConvergentCertified: return "ConvergentCertified";
    case SeriesStatus::DivergentCertified: return "DivergentCertified";
    case SeriesStatus::ConvergentHeuristic: return "ConvergentHeuristic";
    case SeriesStatus::DivergentHeuristic: return "DivergentHeuristic";
    case SeriesStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* grade_name(Grade g) {
  switch (g) {
    case Grade::Certified: return "certified";
    case Grade::Heuristic: return "heuristic";
    case Grade::TruncationScale: return "truncation-scale";
  }
  return "?";
}

ModelGraph model_from_radial(std::vector<double> outer_curv,
                             std::vector<double> sphere_measure,
                             std::map<SeriesId, TailAnnotation> tails) {
  if (outer_curv.size() != sphere_measure.size())
    fail(Errc::BadParams, "outer_curv and sphere_measure lengths differ");
  const int L = static_cast<int>(outer_curv.size());
  if (L < 3) fail(Errc::LengthTooShort, "need at least 3 radii, got " + std::to_string(L));
  for (int r = 0; r < L; ++r) {
    if (!(outer_curv[r] > 0.0) || !std::isfinite(outer_curv[r]))
      fail(Errc::NonPositiveEntry, "outer curvature at r=" + std::to_string(r));
    if (!(sphere_measure[r] > 0.0) || !std::isfinite(sphere_measure[r]))
      fail(Errc::NonPositiveEntry, "sphere measure at r=" + std::to_string(r));
  }

  ModelGraph mg;
  mg.length = L;
  mg.outer_curv = std::move(outer_curv);
  mg.sphere_measure = std::move(sphere_measure);
  mg.boundary_area.resize(L);
  mg.inner_curv.assign(L, 0.0);
  for (int r = 0; r < L; ++r) {
    mg.boundary_area[r] = mg.outer_curv[r] * mg.sphere_measure[r];
    if (r + 1 < L)
      mg.inner_curv[r + 1] = mg.boundary_area[r] / mg.sphere_measure[r + 1];
  }
  mg.tails = std::move(tails);
  return mg;
}

std::optional<ModelGraph> detect_model(const WeightedGraph& g, Vertex root,
                                       int* first_violating_sphere) {
  MetricView mv = metric_view(g, root);
  CurvatureField cf = curvature_field(g, mv);

  // kappa+ is unreliable on frontier vertices; spheres containing any are
  // dropped from the radial range.
  int usable = mv.radius();
  for (Vertex v : g.frontier_vertices()) usable = std::min(usable, mv.distance[v] - 1);
  if (usable < 2) {
    if (first_violating_sphere) *first_violating_sphere = -1;
    return std::nullopt;
  }

  std::vector<double> outer(usable + 1), ms(usable + 1);
  for (int r = 0; r <= usable; ++r) {
    double out_min = std::numeric_limits<double>::infinity(), out_max = 0.0;
    double in_min = std::numeric_limits<double>::infinity(), in_max = 0.0;
    double msum = 0.0;
    for (Vertex v : mv.spheres[r]) {
      msum += g.measure(v);
      out_min = std::min(out_min, cf.outer[v]);
      out_max = std::max(out_max, cf.outer[v]);
      in_min = std::min(in_min, cf.inner[v]);
      in_max = std::max(in_max, cf.inner[v]);
    }
    auto spread_ok = [](double lo, double hi) {
      double scale = std::max(std::abs(lo), std::abs(hi));
      return scale == 0.0 || (hi - lo) <= 1e-10 * scale;
    };
    if (!spread_ok(out_min, out_max) || !spread_ok(in_min, in_max) ||
        !(out_max > 0.0)) {
      // outermost usable sphere must still have outward edges; a dead end
      // breaks symmetry as well
      if (first_violating_sphere) *first_violating_sphere = r;
      return std::nullopt;
    }
    outer[r] = out_max;
    ms[r] = msum;
  }
  ModelGraph mg = model_from_radial(std::move(outer), std::move(ms));
  // Cross-check the detected inner curvature against the field.
  for (int r = 1; r <= usable; ++r) {
    double want = mg.inner_curv[r];
    for (Vertex v : mv.spheres[r]) {
      if (std::abs(cf.inner[v] - want) > 1e-10 * std::max(1.0, std::abs(want))) {
        if (first_violating_sphere) *first_violating_sphere = r;
        return std::nullopt;
      }
    }
  }
  if (first_violating_sphere) *first_violating_sphere = -1;
  return mg;
}

namespace {

// Sum_{j=N}^inf j^{-alpha} via Euler-Maclaurin; alpha > 1, N >= 2.
double zeta_tail(double N, double alpha) {
  return std::pow(N, 1.0 - alpha) / (alpha - 1.0) + 0.5 * std::pow(N, -alpha) +
         alpha / 12.0 * std::pow(N, -alpha - 1.0);
}

}  // namespace

TailMeasure tail_measure(const ModelGraph& mg) {
  TailMeasure tm;
  const int L = mg.length;
  auto it = mg.tails.find(SeriesId::SphereMeasure);

  bool nondecreasing = true;
  for (int r = 1; r < L; ++r)
    if (mg.sphere_measure[r] < mg.sphere_measure[r - 1] * (1.0 - 1e-12)) {
      nondecreasing = false;
      break;
    }

  bool finite = false;
  double beyond = 0.0;  // sum over r >= L
  if (it != mg.tails.end()) {
    const TailAnnotation& a = it->second;
    if (a.kind == TailAnnotation::Kind::Power) {
      if (a.exponent > 1.0) {
        finite = true;
        // m(S_r) ~ c (r+1)^-alpha calibrated on the last stored value
        double c = mg.sphere_measure[L - 1] * std::pow(static_cast<double>(L), a.exponent);
        beyond = c * zeta_tail(static_cast<double>(L + 1), a.exponent);
      }
    } else {
      if (a.exponent > 0.0) {
        finite = true;
        double q = std::exp(-a.exponent);
        beyond = mg.sphere_measure[L - 1] * q / (1.0 - q);
      }
    }
    tm.known = true;
  } else if (nondecreasing) {
    tm.known = true;  // certifiably infinite total measure
  }
  tm.finite = finite;
  if (!finite) return tm;

  tm.values.assign(L, 0.0);
  double acc = beyond;
  for (int r = L - 1; r >= 0; --r) {
    tm.values[r] = acc;  // m(B_r^c) = sum_{i>r} m(S_i)
    acc += mg.sphere_measure[r];
  }
  return tm;
}

SeriesVerdict series_verdict(SeriesId id, const std::vector<double>& terms,
                             std::optional<TailAnnotation> tail) {
  SeriesVerdict sv;
  sv.id = id;
  const int n = static_cast<int>(terms.size());
  if (n < 4)
    fail(Errc::TooFewTerms,
         std::string(series_id_name(id)) + ": " + std::to_string(n) + " terms");
  for (double t : terms)
    if (!(t > 0.0) || !std::isfinite(t))
      fail(Errc::NonPositiveEntry, "series terms must be positive");

  double acc = 0.0;
  for (double t : terms) {
    acc += t;
    sv.partial_sums.push_back(acc);
  }

  bool nondecreasing = true;
  for (int i = 1; i < n; ++i)
    if (terms[i] < terms[i - 1] * (1.0 - 1e-12)) { nondecreasing = false; break; }
  if (nondecreasing) {
    sv.status = SeriesStatus::DivergentCertified;
    sv.basis = "terms nondecreasing";
    return sv;
  }

  // The slope heuristic needs a real sample; the certified paths above and
  // below do not.
  if (!tail && n < 16)
    fail(Errc::TooFewTerms,
         std::string(series_id_name(id)) + ": " + std::to_string(n) +
             " terms is too few for the slope fit");

  if (tail) {
    if (tail->kind == TailAnnotation::Kind::Power) {
      sv.status = tail->exponent > 1.0 ? SeriesStatus::ConvergentCertified
                                       : SeriesStatus::DivergentCertified;
      sv.basis = "tail annotation power " + std::to_string(tail->exponent);
    } else {
      sv.status = tail->exponent > 0.0 ? SeriesStatus::ConvergentCertified
                                       : SeriesStatus::DivergentCertified;
      sv.basis = "tail annotation exp " + std::to_string(tail->exponent);
    }
    return sv;
  }

  // Log-log slope over the last half of the range.
  int from = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = from; i < n; ++i) {
    double x = std::log(static_cast<double>(i + 1));
    double y = std::log(terms[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  double denom = cnt * sxx - sx * sx;
  if (denom <= 0.0) {
    sv.status = SeriesStatus::Inconclusive;
    sv.basis = "degenerate slope fit";
    return sv;
  }
  double slope = (cnt * sxy - sx * sy) / denom;
  sv.fitted_slope = slope;
  if (slope < -1.2) {
    sv.status = SeriesStatus::ConvergentHeuristic;
    sv.basis = "fitted slope " + std::to_string(slope);
  } else if (slope > -0.8) {
    sv.status = SeriesStatus::DivergentHeuristic;
    sv.basis = "fitted slope " + std::to_string(slope);
  } else {
    sv.status = SeriesStatus::Inconclusive;
    sv.basis = "fitted slope " + std::to_string(slope) + " in the undecidable band";
  }
  return sv;
}

namespace {

std::optional<TailAnnotation> tail_for(const ModelGraph& mg, SeriesId id) {
  auto it = mg.tails.find(id);
  if (it == mg.tails.end()) return std::nullopt;
  return it->second;
}

Grade combine(std::initializer_list<const SeriesVerdict*> vs) {
  for (const SeriesVerdict* v : vs)
    if (!v->certified()) return Grade::Heuristic;
  return Grade::Certified;
}

}  // namespace

FellerClassification classify_feller(const ModelGraph& mg) {
  FellerClassification fc;
  std::vector<double> inv;
  for (double b : mg.boundary_area) inv.push_back(1.0 / b);
  fc.inv_boundary = series_verdict(SeriesId::InvBoundary, inv,
                                   tail_for(mg, SeriesId::InvBoundary));
  if (fc.inv_boundary.status == SeriesStatus::Inconclusive)
    fail(Errc::InconclusiveSeries, "sum 1/dB_r undecided");

  if (fc.inv_boundary.convergent()) {
    fc.feller = true;
    fc.case_id = 1;
    fc.grade = combine({&fc.inv_boundary});
    return fc;
  }

  TailMeasure tm = tail_measure(mg);
  if (!tm.known)
    fail(Errc::InconclusiveSeries,
         "total measure undecided: annotate sphere_measure");
  if (!tm.finite) {
    // m(B_r^c) = infinity termwise: the tail series diverges with the same
    // certainty as the measure classification.
    fc.tail_series.id = SeriesId::TailMeasureOverBoundary;
    fc.tail_series.status = SeriesStatus::DivergentCertified;
    fc.tail_series.basis = "infinite total measure";
    fc.feller = true;
    fc.case_id = 2;
    fc.grade = combine({&fc.inv_boundary, &fc.tail_series});
    return fc;
  }

  std::vector<double> terms;
  for (int r = 0; r < mg.length; ++r)
    terms.push_back(tm.values[r] / mg.boundary_area[r]);
  fc.tail_series = series_verdict(SeriesId::TailMeasureOverBoundary, terms,
                                  tail_for(mg, SeriesId::TailMeasureOverBoundary));
  if (fc.tail_series.status == SeriesStatus::Inconclusive)
    fail(Errc::InconclusiveSeries, "sum m(B_r^c)/dB_r undecided");

  fc.grade = combine({&fc.inv_boundary, &fc.tail_series});
  if (fc.tail_series.divergent()) {
    fc.feller = true;
    fc.case_id = 2;
  } else {
    fc.feller = false;
    fc.case_id = 0;
  }
  return fc;
}

SCClassification classify_stochastic_completeness(const ModelGraph& mg) {
  std::vector<double> terms;
  double ball = 0.0;
  for (int r = 0; r < mg.length; ++r) {
    ball += mg.sphere_measure[r];
    terms.push_back(ball / mg.boundary_area[r]);
  }
  SCClassification sc;
  sc.series = series_verdict(SeriesId::BallMeasureOverBoundary, terms,
                             tail_for(mg, SeriesId::BallMeasureOverBoundary));
  if (sc.series.status == SeriesStatus::Inconclusive)
    fail(Errc::InconclusiveSeries, "sum m(B_r)/dB_r undecided");
  sc.complete = sc.series.divergent();
  sc.grade = combine({&sc.series});
  return sc;
}

TransienceClassification classify_transience(const ModelGraph& mg) {
  std::vector<double> inv;
  for (double b : mg.boundary_area) inv.push_back(1.0 / b);
  TransienceClassification tc;
  tc.series = series_verdict(SeriesId::InvBoundary, inv,
                             tail_for(mg, SeriesId::InvBoundary));
  if (tc.series.status == SeriesStatus::Inconclusive)
    fail(Errc::InconclusiveSeries, "sum 1/dB_r undecided");
  tc.transient = tc.series.convergent();
  tc.grade = combine({&tc.series});
  return tc;
}

RadialSolve radial_h(const ModelGraph& mg, double lambda, int n) {
  if (!(lambda < 0.0)) fail(Errc::BadParams, "lambda must be negative");
  if (n < 2 || n > mg.length - 1)
    fail(Errc::BadParams, "boundary radius n out of range");

  // Thomas elimination; the system is strictly diagonally dominant.
  const int m = n - 1;
  std::vector<double> diag(m), lower(m), upper(m), rhs(m, 0.0);
  for (int i = 0; i < m; ++i) {
    int r = i + 1;
    diag[i] = mg.outer_curv[r] + mg.inner_curv[r] - lambda;
    lower[i] = -mg.inner_curv[r];
    upper[i] = -mg.outer_curv[r];
  }
  rhs[0] = mg.inner_curv[1];

  std::vector<double> cp(m), dp(m);
  if (diag[0] == 0.0) fail(Errc::SolverBreakdown, "zero pivot");
  cp[0] = (m > 1 ? upper[0] : 0.0) / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (int i = 1; i < m; ++i) {
    double den = diag[i] - lower[i] * cp[i - 1];
    if (den == 0.0) fail(Errc::SolverBreakdown, "zero pivot");
    cp[i] = (i < m - 1 ? upper[i] : 0.0) / den;
    dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / den;
  }

  RadialSolve rs;
  rs.h.assign(n + 1, 0.0);
  rs.h[0] = 1.0;
  rs.h[n] = 0.0;
  rs.h[m] = dp[m - 1];
  for (int i = m - 2; i >= 0; --i) rs.h[i + 1] = dp[i] - cp[i] * rs.h[i + 2];

  rs.f.assign(n, 0.0);
  double scale = 1.0;
  for (int r = 0; r < n; ++r) {
    rs.f[r] = mg.boundary_area[r] * (rs.h[r] - rs.h[r + 1]);
    scale = std::max(scale, std::abs(rs.f[r]));
  }
  for (int r = 1; r < n; ++r) {
    double resid = std::abs((rs.f[r] - rs.f[r - 1]) -
                            lambda * rs.h[r] * mg.sphere_measure[r]);
    rs.recursion_residual = std::max(rs.recursion_residual, resid);
  }
  if (rs.recursion_residual > 1e-10 * scale)
    fail(Errc::SolverBreakdown,
         "recursion residual " + std::to_string(rs.recursion_residual));
  return rs;
}

RadialLimit radial_limit_h(const ModelGraph& mg, double lambda, double tol) {
  const int n = (mg.length - 1) / 2;
  if (n < 4) fail(Errc::LengthTooShort, "truncation too short for a limit estimate");
  const int n2 = 2 * n;

  RadialSolve small = radial_h(mg, lambda, n);
  RadialSolve big = radial_h(mg, lambda, n2);

  RadialLimit rl;
  rl.solve_n = n;
  rl.trusted_max = n / 2;
  rl.recursion_residual = std::max(small.recursion_residual, big.recursion_residual);
  for (int r = 0; r <= rl.trusted_max; ++r)
    rl.sup_diff = std::max(rl.sup_diff, std::abs(small.h[r] - big.h[r]));
  if (rl.sup_diff >= tol)
    fail(Errc::NotConvergedAtTruncation,
         "solves at n and 2n differ by " + std::to_string(rl.sup_diff));

  rl.limit_profile.assign(big.h.begin(), big.h.begin() + rl.trusted_max + 1);
  rl.lim_estimate = rl.limit_profile[rl.trusted_max];
  if (rl.trusted_max >= 2 && rl.lim_estimate > 0.0) {
    rl.plateau_rel_change =
        std::abs(rl.limit_profile[rl.trusted_max] - rl.limit_profile[rl.trusted_max - 2]) /
        rl.lim_estimate;
    rl.plateau = rl.plateau_rel_change < 0.01;
  }

  rl.f_positive_decreasing = true;
  for (int r = 0; r < n2; ++r) {
    if (!(big.f[r] > 0.0)) rl.f_positive_decreasing = false;
    if (r && big.f[r] > big.f[r - 1] + 1e-12) rl.f_positive_decreasing = false;
  }

  // Finite-truncation form of the f-bracket, boundary term f(2n-1) kept;
  // the infinite-graph bracket is its limit.
  double M = 0.0;
  double fl = big.f[n2 - 1];
  for (int r = n2 - 2; r >= 0; --r) {
    M += mg.sphere_measure[r + 1];
    double lo = fl - lambda * big.h[n2 - 1] * M;
    double hi = fl - lambda * big.h[r + 1] * M;
    rl.bracket_violation = std::max(rl.bracket_violation, lo - big.f[r]);
    rl.bracket_violation = std::max(rl.bracket_violation, big.f[r] - hi);
  }
  if (rl.bracket_violation > 1e-8)
    fail(Errc::SolverBreakdown,
         "f-bracket violated by " + std::to_string(rl.bracket_violation));
  return rl;
}

std::vector<double> increasing_radial_solution(const ModelGraph& mg, double lambda) {
  if (!(lambda < 0.0)) fail(Errc::BadParams, "lambda must be negative");
  std::vector<double> v(mg.length, 0.0);
  v[0] = 1.0;
  if (mg.length > 1) v[1] = v[0] - lambda * v[0] / mg.outer_curv[0];
  for (int r = 1; r + 1 < mg.length; ++r)
    v[r + 1] = v[r] + (mg.inner_curv[r] * (v[r] - v[r - 1]) - lambda * v[r]) /
                          mg.outer_curv[r];
  return v;
}

}  // namespace feller
