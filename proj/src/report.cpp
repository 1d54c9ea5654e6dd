#include "feller/report.hpp"

#include <sstream>

#include "feller/io.hpp"

namespace feller {

std::string Report::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["results"] = results;
  j["provenance"] = provenance;
  return j.dump(2) + "\n";
}

Json to_json(const SeriesVerdict& sv) {
  Json j;
  j["series"] = series_id_name(sv.id);
  j["status"] = series_status_name(sv.status);
  j["basis"] = sv.basis;
  if (sv.status == SeriesStatus::ConvergentHeuristic ||
      sv.status == SeriesStatus::DivergentHeuristic)
    j["fitted_slope"] = sv.fitted_slope;
  j["last_partial_sum"] = sv.partial_sums.empty() ? 0.0 : sv.partial_sums.back();
  return j;
}

Json to_json(const FellerClassification& fc) {
  Json j;
  j["feller"] = fc.feller;
  j["case"] = fc.case_id;
  j["grade"] = grade_name(fc.grade);
  j["inv_boundary"] = to_json(fc.inv_boundary);
  j["tail_measure_over_boundary"] = to_json(fc.tail_series);
  return j;
}

Json to_json(const SCClassification& sc) {
  Json j;
  j["stochastically_complete"] = sc.complete;
  j["grade"] = grade_name(sc.grade);
  j["ball_measure_over_boundary"] = to_json(sc.series);
  return j;
}

Json to_json(const TransienceClassification& tc) {
  Json j;
  j["transient"] = tc.transient;
  j["grade"] = grade_name(tc.grade);
  j["inv_boundary"] = to_json(tc.series);
  return j;
}

Json to_json(const CriterionReport& cr) {
  Json j;
  j["criterion"] = cr.criterion_id;
  j["applies"] = applies_name(cr.applies);
  j["conclusion"] = conclusion_name(cr.conclusion);
  j["grade"] = grade_name(cr.grade);
  if (cr.witness) j["witness"] = *cr.witness;
  j["scope_note"] = cr.scope_note;
  return j;
}

Json to_json(const FellerEvidenceRecord& rec) {
  Json j;
  j["verdict"] = harmonic_verdict_name(rec.verdict);
  j["radii_used"] = rec.radii_used;
  j["profile_value"] = rec.profile_value;
  j["note"] = rec.note;
  return j;
}

Json to_json(const RadialLimit& rl) {
  Json j;
  j["solve_n"] = rl.solve_n;
  j["trusted_max_radius"] = rl.trusted_max;
  j["lim_estimate"] = rl.lim_estimate;
  j["sup_diff_n_vs_2n"] = rl.sup_diff;
  j["plateau"] = rl.plateau;
  j["plateau_rel_change"] = rl.plateau_rel_change;
  j["f_positive_decreasing"] = rl.f_positive_decreasing;
  j["bracket_violation"] = rl.bracket_violation;
  j["recursion_residual"] = rl.recursion_residual;
  j["limit_profile"] = rl.limit_profile;
  return j;
}

Json harmonic_solution_json(const HarmonicSolution& sol) {
  Json j;
  j["lambda"] = sol.lambda;
  j["converged"] = sol.converged;
  j["sup_gap"] = sol.sup_gap;
  j["residual"] = sol.residual;
  j["residual_rel"] = sol.residual_rel;
  j["frontier_radius"] = sol.frontier_radius;
  j["final_ball_radius"] = sol.final_ball_radius;
  j["trusted_max_radius"] = sol.trusted_max_radius;
  j["decay_profile"] = sol.decay_profile;
  return j;
}

Json mass_probe_json(const MassProbe& mp) {
  Json j;
  j["per_region"] = mp.per_region;
  j["sc_evidence"] = evidence_name(mp.sc_evidence);
  j["frontier_contaminated"] = mp.frontier_contaminated;
  return j;
}

Json feller_probe_json(const FellerProbe& fp) {
  Json j;
  j["radii"] = fp.radii;
  j["sphere_sup"] = fp.sphere_sup;
  Json flags = Json::array();
  for (char c : fp.contaminated) flags.push_back(c != 0);
  j["contaminated"] = flags;
  j["frontier_contaminated"] = fp.frontier_contaminated;
  j["feller_evidence"] = evidence_name(fp.feller_evidence);
  return j;
}

std::string profile_csv(const std::string& key_name, const std::string& value_name,
                        const std::vector<std::pair<std::string, double>>& rows) {
  std::ostringstream out;
  out << key_name << "," << value_name << "\n";
  for (const auto& [k, v] : rows) out << k << "," << format_double(v) << "\n";
  return out.str();
}

}  // namespace feller
