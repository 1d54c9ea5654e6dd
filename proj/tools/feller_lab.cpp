// feller-lab: classify, solve, and probe Feller behavior of weighted graph
// truncations. One subcommand per invocation; JSON reports on stdout by
// default. Exit codes: 0 = ran with a conclusion, 2 = ran but inconclusive,
// 1 = error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "feller/generators.hpp"
#include "feller/harmonic.hpp"
#include "feller/io.hpp"
#include "feller/report.hpp"

using namespace feller;

namespace {

constexpr int kExitConcluded = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

void emit(const std::string& text, const OutputOptions& opt) {
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.out_path);
    if (!out) fail(Errc::ParseError, "cannot write " + opt.out_path);
    out << text;
  }
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

Vertex resolve_root(const WeightedGraph& g, const std::string& root) {
  return g.vertex(root);
}

std::vector<Vertex> resolve_omega(const WeightedGraph& g, const std::string& spec,
                                  Vertex root) {
  if (spec.empty() || spec == "root") return {root};
  if (spec.rfind("ball:", 0) == 0) {
    int k = std::stoi(spec.substr(5));
    MetricView mv = metric_view(g, root);
    if (k > mv.radius()) fail(Errc::BadParams, "omega ball exceeds truncation");
    return mv.balls[k];
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<Vertex> out;
    std::istringstream ss(spec.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(g.vertex(tok));
    return out;
  }
  fail(Errc::BadParams, "omega spec must be root, ball:K or list:v1,v2,...");
}

Json graph_provenance(const WeightedGraph& g, Vertex root) {
  MetricView mv = metric_view(g, root);
  int frontier_radius = mv.radius() + 1;
  for (Vertex v : g.frontier_vertices())
    frontier_radius = std::min(frontier_radius, mv.distance[v]);
  Json j;
  j["vertices"] = g.size();
  j["truncation_radius"] = mv.radius();
  j["frontier_radius"] = frontier_radius;
  j["frontier_count"] = g.frontier_vertices().size();
  return j;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_classify_model(const std::string& input, const std::string& root,
                       const OutputOptions& opt) {
  Report rep;
  rep.command = "classify-model";
  rep.config["input"] = input;

  std::optional<ModelGraph> mg;
  if (ends_with(input, ".model")) {
    mg = parse_model_file(input);
    rep.provenance["source"] = "radial file";
    rep.provenance["length"] = mg->length;
  } else {
    WeightedGraph g = parse_graph_file(input);
    if (root.empty()) fail(Errc::BadParams, "--root required for graph input");
    Vertex rv = resolve_root(g, root);
    rep.config["root"] = root;
    int violating = -1;
    mg = detect_model(g, rv, &violating);
    if (!mg)
      fail(Errc::NotAModel,
           "curvature not spherically symmetric; first violating sphere " +
               std::to_string(violating));
    rep.provenance = graph_provenance(g, rv);
    rep.provenance["source"] = "detected from graph";
  }

  bool inconclusive = false;
  try {
    rep.results["feller"] = to_json(classify_feller(*mg));
  } catch (const Error& e) {
    if (e.code() != Errc::InconclusiveSeries && e.code() != Errc::TooFewTerms) throw;
    rep.results["feller"] = {{"inconclusive", true}, {"reason", e.what()}};
    inconclusive = true;
  }
  try {
    rep.results["stochastic_completeness"] = to_json(classify_stochastic_completeness(*mg));
  } catch (const Error& e) {
    if (e.code() != Errc::InconclusiveSeries && e.code() != Errc::TooFewTerms) throw;
    rep.results["stochastic_completeness"] = {{"inconclusive", true}, {"reason", e.what()}};
    inconclusive = true;
  }
  try {
    rep.results["transience"] = to_json(classify_transience(*mg));
  } catch (const Error& e) {
    if (e.code() != Errc::InconclusiveSeries && e.code() != Errc::TooFewTerms) throw;
    rep.results["transience"] = {{"inconclusive", true}, {"reason", e.what()}};
    inconclusive = true;
  }

  if (opt.format == "csv") fail(Errc::BadParams, "csv is for profile commands only");
  emit(rep.to_json(), opt);
  return inconclusive ? kExitInconclusive : kExitConcluded;
}

int run_solve_h(const std::string& input, const std::string& root, double lambda,
                const std::string& radii_csv, const std::string& omega_spec,
                double tol_solve, double tol_conv, double tol_decay,
                const OutputOptions& opt) {
  WeightedGraph g = parse_graph_file(input);
  Vertex rv = resolve_root(g, root);
  ExteriorProblem problem =
      make_exterior_problem(g, resolve_omega(g, omega_spec, rv), lambda, rv);
  ExhaustionSequence ex = radii_csv.empty()
                              ? default_exhaustion(g, rv)
                              : ball_exhaustion(g, rv, parse_int_list(radii_csv));
  HarmonicSolution sol = minimal_h(g, problem, ex, tol_conv);
  if (sol.residual_rel > tol_solve)
    fail(Errc::SolverBreakdown,
         "relative residual " + format_double(sol.residual_rel) + " exceeds --tol-solve");
  FellerEvidenceRecord rec;
  try {
    rec = feller_verdict_from_h(sol, tol_decay);
  } catch (const Error& e) {
    if (e.code() != Errc::InsufficientAnnuli) throw;
    rec.verdict = HarmonicVerdict::Inconclusive;
    rec.note = e.what();
  }

  Report rep;
  rep.command = "solve-h";
  rep.config["input"] = input;
  rep.config["root"] = root;
  rep.config["lambda"] = lambda;
  rep.config["omega"] = omega_spec.empty() ? "root" : omega_spec;
  rep.config["tol_solve"] = tol_solve;
  rep.config["tol_conv"] = tol_conv;
  rep.config["tol_decay"] = tol_decay;
  rep.results["solution"] = harmonic_solution_json(sol);
  rep.results["evidence"] = to_json(rec);
  rep.provenance = graph_provenance(g, rv);
  rep.provenance["grade"] = grade_name(Grade::TruncationScale);

  if (opt.format == "csv") {
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t r = 0; r < sol.decay_profile.size(); ++r)
      rows.emplace_back(std::to_string(r), sol.decay_profile[r]);
    emit(profile_csv("radius", "sup_h", rows), opt);
  } else {
    emit(rep.to_json(), opt);
  }
  return rec.verdict == HarmonicVerdict::Inconclusive ? kExitInconclusive
                                                      : kExitConcluded;
}

VertexFunction resolve_u0(const WeightedGraph& g, const std::string& spec) {
  VertexFunction u0 = VertexFunction::undefined(g.size());
  if (spec.rfind("delta:", 0) == 0) {
    Vertex v = g.vertex(spec.substr(6));
    u0.set(v, 1.0 / g.measure(v));
    return u0;
  }
  if (spec.rfind("indicator:", 0) == 0) {
    std::istringstream ss(spec.substr(10));
    std::string tok;
    while (std::getline(ss, tok, ',')) u0.set(g.vertex(tok), 1.0);
    return u0;
  }
  fail(Errc::BadParams, "u0 spec must be delta:V or indicator:v1,v2,...");
}

int run_heat(const std::string& input, const std::string& root, const std::string& u0_spec,
             const std::string& times_csv, const std::string& radii_csv,
             const OutputOptions& opt) {
  WeightedGraph g = parse_graph_file(input);
  Vertex rv = resolve_root(g, root);
  std::vector<double> times = parse_double_list(times_csv);
  if (times.empty()) fail(Errc::BadParams, "--times required");
  ExhaustionSequence ex = radii_csv.empty()
                              ? default_exhaustion(g, rv)
                              : ball_exhaustion(g, rv, parse_int_list(radii_csv));
  VertexFunction u0 = resolve_u0(g, u0_spec);

  MetricView mv = metric_view(g, rv);
  int rmax = 0;
  for (Vertex v : ex.regions.back().members) rmax = std::max(rmax, mv.distance[v]);
  std::vector<int> annuli;
  for (int r = 0; r <= rmax; ++r) annuli.push_back(r);

  Report rep;
  rep.command = "heat";
  rep.config["input"] = input;
  rep.config["root"] = root;
  rep.config["u0"] = u0_spec;
  rep.config["times"] = times;
  rep.results["times"] = Json::array();
  std::vector<std::pair<std::string, double>> csv_rows;
  for (double t : times) {
    Json jt;
    jt["t"] = t;
    if (t > 0.0) {
      // mass probe needs a delta source; only run it for delta u0
      if (u0_spec.rfind("delta:", 0) == 0)
        jt["mass_probe"] = mass_probe_json(mass_probe(g, ex, g.vertex(u0_spec.substr(6)), t));
    }
    FellerProbe fp = feller_probe(g, ex, u0, t, annuli);
    jt["feller_probe"] = feller_probe_json(fp);
    for (std::size_t k = 0; k < fp.radii.size(); ++k)
      csv_rows.emplace_back(std::to_string(t) + ":" + std::to_string(fp.radii[k]),
                            fp.sphere_sup[k]);
    // echo the evolution itself on small regions
    const auto& interior = ex.regions.back().interior;
    if (interior.size() <= 256) {
      DirichletOperator op = dirichlet_operator(g, ex.regions.back());
      HeatEvolution ev = heat_evolve(g, op, u0, {t});
      Json vals = Json::object();
      for (std::size_t i = 0; i < op.interior.size(); ++i)
        vals[g.name(op.interior[i])] = ev.values[0][static_cast<int>(i)];
      jt["values"] = vals;
      jt["mass"] = ev.mass[0];
      jt["l2norm"] = ev.l2norm[0];
    }
    rep.results["times"].push_back(jt);
  }
  rep.provenance = graph_provenance(g, rv);

  if (opt.format == "csv") emit(profile_csv("time:radius", "sphere_sup", csv_rows), opt);
  else emit(rep.to_json(), opt);
  return kExitConcluded;
}

int run_criteria(const std::string& input, const std::string& root,
                 const std::string& criterion, double K, double bound, int R,
                 double lambda, const std::string& model_path, bool sc_evidence,
                 bool sc_auto, const OutputOptions& opt) {
  WeightedGraph g = parse_graph_file(input);
  Vertex rv = resolve_root(g, root);
  MetricView mv = metric_view(g, rv);

  if (sc_auto && !sc_evidence) {
    // Accept analytic stochastic completeness from the model structure.
    if (auto mg = detect_model(g, rv)) {
      try {
        sc_evidence = classify_stochastic_completeness(*mg).complete;
      } catch (const Error& e) {
        if (e.code() != Errc::InconclusiveSeries) throw;
      }
    }
  }

  CriterionReport cr;
  if (criterion == "uniform-bound") {
    int radius = std::min(mv.radius() / 2, 20);
    cr = uniform_curvature_bound(g, K, mv.balls[std::max(radius / 2, 1)], radius);
  } else if (criterion == "bounded-operator") {
    cr = bounded_operator_check(g, bound);
  } else if (criterion == "measure-divergence") {
    cr = measure_divergence_check(g, rv);
  } else if (criterion == "twisted-feller") {
    cr = twisted_feller_check(g, rv, TwistFunction::reciprocal(mv.radius() + 1), lambda, R);
  } else if (criterion == "twisted-nonfeller") {
    cr = twisted_nonfeller_check(g, rv, TwistFunction::reciprocal_plus_one(mv.radius() + 1),
                                 lambda, R, sc_evidence);
  } else if (criterion == "compare-model") {
    if (model_path.empty()) fail(Errc::BadParams, "--model required");
    cr = compare_to_model(g, rv, parse_model_file(model_path), R);
  } else {
    fail(Errc::UnknownCriterion, criterion);
  }

  Report rep;
  rep.command = "criteria";
  rep.config["input"] = input;
  rep.config["root"] = root;
  rep.config["criterion"] = criterion;
  rep.config["R"] = R;
  rep.config["lambda"] = lambda;
  rep.results["report"] = to_json(cr);
  rep.provenance = graph_provenance(g, rv);

  if (opt.format == "csv") fail(Errc::BadParams, "csv is for profile commands only");
  emit(rep.to_json(), opt);
  return cr.conclusion == Conclusion::None ? kExitInconclusive : kExitConcluded;
}

int run_generate(const std::string& example, int size, double eps, double c,
                 const std::string& measure_rule, const std::string& out_prefix,
                 const OutputOptions& opt) {
  GeneratedFiles files = generate_example(example, size, eps, c, measure_rule, out_prefix);
  Report rep;
  rep.command = "generate";
  rep.config["example"] = example;
  rep.config["size"] = size;
  rep.config["epsilon"] = eps;
  if (example == "glued-line") {
    rep.config["c"] = c;
    rep.config["measure_rule"] = measure_rule;
  }
  if (!files.graph_path.empty()) rep.results["graph_file"] = files.graph_path;
  if (!files.model_path.empty()) rep.results["model_file"] = files.model_path;
  if (opt.format == "csv") fail(Errc::BadParams, "csv is for profile commands only");
  emit(rep.to_json(), opt);
  return kExitConcluded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feller-property laboratory for weighted graph truncations"};
  app.require_subcommand(1);
  app.fallthrough();

  OutputOptions opt;
  app.add_option("--format", opt.format, "json|csv (csv for profile commands)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", opt.out_path, "write the report here instead of stdout");

  std::string input, root, radii, omega = "root", u0 = "delta:0", times;
  std::string criterion, model_path, example, measure_rule = "feller", out_prefix = "example";
  double lambda = -1.0, K = 1.0, bound = 1.0, eps = 1.0, c = 2.0;
  double tol_solve = 1e-10, tol_conv = 1e-8, tol_decay = 1e-3;
  int R = 2, size = 64;
  bool sc_evidence = false, sc_auto = false;

  auto* classify = app.add_subcommand("classify-model", "series classification of a model");
  classify->add_option("--input", input, "model (.model) or graph file")->required();
  classify->add_option("--root", root, "root vertex (graph input)");

  auto* solveh = app.add_subcommand("solve-h", "exterior lambda-harmonic solve by exhaustion");
  solveh->add_option("--input", input)->required();
  solveh->add_option("--root", root)->required();
  solveh->add_option("--lambda", lambda)->check(CLI::Range(-1e18, -1e-12));
  solveh->add_option("--radii", radii, "exhaustion ball radii, comma separated");
  solveh->add_option("--omega", omega, "root | ball:K | list:v1,v2,...");
  solveh->add_option("--tol-solve", tol_solve);
  solveh->add_option("--tol-conv", tol_conv);
  solveh->add_option("--tol-decay", tol_decay);

  auto* heat = app.add_subcommand("heat", "Dirichlet heat evolution probes");
  heat->add_option("--input", input)->required();
  heat->add_option("--root", root)->required();
  heat->add_option("--u0", u0, "delta:V | indicator:v1,v2,...");
  heat->add_option("--times", times, "comma separated, increasing")->required();
  heat->add_option("--radii", radii);

  auto* crit = app.add_subcommand("criteria", "run one curvature-type criterion");
  crit->add_option("--input", input)->required();
  crit->add_option("--root", root)->required();
  crit->add_option("--criterion", criterion,
                   "uniform-bound|bounded-operator|measure-divergence|twisted-feller|"
                   "twisted-nonfeller|compare-model")
      ->required();
  crit->add_option("--K", K);
  crit->add_option("--bound", bound);
  crit->add_option("--R", R);
  crit->add_option("--lambda", lambda);
  crit->add_option("--model", model_path);
  crit->add_flag("--sc-evidence", sc_evidence, "assert stochastic completeness");
  crit->add_flag("--sc-auto", sc_auto, "derive SC evidence from model structure");

  auto* gen = app.add_subcommand("generate", "write a bundled example to files");
  gen->add_option("--example", example,
                  "unit-line|model-example|binary-tree-unit|ternary-anti-example|glued-line")
      ->required();
  gen->add_option("--size", size, "line size / tree depth");
  gen->add_option("--epsilon", eps);
  gen->add_option("--c", c, "glue weight constant");
  gen->add_option("--measure-rule", measure_rule, "feller|nonfeller");
  gen->add_option("--prefix", out_prefix, "output file prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitError;
  }

  try {
    if (classify->parsed()) return run_classify_model(input, root, opt);
    if (solveh->parsed())
      return run_solve_h(input, root, lambda, radii, omega, tol_solve, tol_conv,
                         tol_decay, opt);
    if (heat->parsed()) return run_heat(input, root, u0, times, radii, opt);
    if (crit->parsed())
      return run_criteria(input, root, criterion, K, bound, R, lambda, model_path,
                          sc_evidence, sc_auto, opt);
    if (gen->parsed())
      return run_generate(example, size, eps, c, measure_rule, out_prefix, opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
