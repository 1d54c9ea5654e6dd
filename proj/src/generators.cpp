#include "feller/generators.hpp"

#include <cmath>
#include <functional>

#include "feller/io.hpp"

namespace feller {

namespace {

std::string num(long v) { return std::to_string(v); }

}  // namespace

WeightedGraph gen_unit_line(int size) {
  if (size < 8) fail(Errc::BadParams, "size must be >= 8");
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::string, double> m;
  for (int r = 0; r < size; ++r) edges.push_back({num(r), num(r + 1), 1.0});
  for (int r = 0; r <= size; ++r) m[num(r)] = 1.0;
  return WeightedGraph::build(edges, m, {num(size)});
}

WeightedGraph gen_model_example(double eps, int size) {
  if (size < 8) fail(Errc::BadParams, "size must be >= 8");
  if (!(eps > 0.0)) fail(Errc::BadParams, "eps must be positive");
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::string, double> m;
  for (int r = 0; r < size; ++r) edges.push_back({num(r), num(r + 1), 1.0});
  for (int r = 0; r <= size; ++r) m[num(r)] = std::pow(r + 1.0, -(2.0 + eps));
  return WeightedGraph::build(edges, m, {num(size)});
}

namespace {

WeightedGraph gen_forward_tree(int depth, int fanout,
                               const std::function<double(int)>& weight_at,
                               const std::function<double(int)>& measure_at) {
  if (depth < 2) fail(Errc::BadParams, "depth must be >= 2");
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::string, double> m;
  std::vector<std::string> frontier;

  // Generation r has fanout^r vertices named g<r>_<k>; vertex k's forward
  // neighbors are fanout*k .. fanout*k + fanout-1 in generation r+1.
  auto vname = [](int r, long k) { return "g" + num(r) + "_" + num(k); };
  long layer = 1;
  for (int r = 0; r <= depth; ++r) {
    for (long k = 0; k < layer; ++k) {
      m[vname(r, k)] = measure_at(r);
      if (r < depth) {
        double b = weight_at(r);
        for (int j = 0; j < fanout; ++j)
          edges.push_back({vname(r, k), vname(r + 1, fanout * k + j), b});
      } else {
        frontier.push_back(vname(r, k));
      }
    }
    layer *= fanout;
  }
  return WeightedGraph::build(edges, m, frontier);
}

}  // namespace

WeightedGraph gen_binary_tree(int depth) {
  return gen_forward_tree(depth, 2, [](int) { return 1.0; }, [](int) { return 1.0; });
}

WeightedGraph gen_ternary_anti_example(double eps, int depth) {
  if (!(eps > 0.0)) fail(Errc::BadParams, "eps must be positive");
  return gen_forward_tree(
      depth, 3,
      [](int r) { return 2.0 * (r + 1) / std::pow(3.0, r + 1); },
      [eps](int r) { return 1.0 / (std::pow(3.0, r) * std::pow(r + 1.0, 1.0 + eps)); });
}

WeightedGraph gen_glued_line(double c, int size, GluedMeasureRule rule) {
  if (size < 8) fail(Errc::BadParams, "size must be >= 8");
  if (c < 0.0) fail(Errc::BadParams, "c must be >= 0");
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::string, double> m;
  std::vector<std::string> frontier{num(size)};
  for (int r = 0; r < size; ++r) edges.push_back({num(r), num(r + 1), 1.0});
  for (int r = 0; r <= size; ++r) m[num(r)] = std::pow(r + 1.0, -3.0);
  if (c > 0.0) {
    for (int r = 2; r <= size; ++r) {
      std::string p = "x" + num(r);
      edges.push_back({num(r), p, c / (r - 1.0)});
      double rr = r;
      m[p] = rule == GluedMeasureRule::Feller ? 1.0 / (rr * (rr - 1.0))
                                              : 1.0 / (rr * (rr - 1.0) * (rr + 2.0));
    }
    // the pendant of the cut vertex hangs beyond the cut
    frontier.push_back("x" + num(size));
  }
  return WeightedGraph::build(edges, m, frontier);
}

ModelGraph gen_unit_line_radial(int length) {
  if (length < 3) fail(Errc::LengthTooShort, "length must be >= 3");
  std::vector<double> outer(length, 1.0), ms(length, 1.0);
  // constant terms: both classifications certify via the nondecreasing rule
  return model_from_radial(std::move(outer), std::move(ms), {});
}

ModelGraph gen_model_example_radial(double eps, int length) {
  if (length < 3) fail(Errc::LengthTooShort, "length must be >= 3");
  if (!(eps > 0.0)) fail(Errc::BadParams, "eps must be positive");
  std::vector<double> outer(length), ms(length);
  for (int r = 0; r < length; ++r) {
    outer[r] = std::pow(r + 1.0, 2.0 + eps);
    ms[r] = std::pow(r + 1.0, -(2.0 + eps));
  }
  std::map<SeriesId, TailAnnotation> tails;
  // dB_r = 1: inv_boundary terms are constant (certified divergent by shape);
  // m(B_r^c) ~ r^{-(1+eps)} over dB_r = 1
  tails[SeriesId::SphereMeasure] = {TailAnnotation::Kind::Power, 2.0 + eps};
  tails[SeriesId::TailMeasureOverBoundary] = {TailAnnotation::Kind::Power, 1.0 + eps};
  return model_from_radial(std::move(outer), std::move(ms), tails);
}

ModelGraph gen_binary_tree_radial(int length) {
  if (length < 3) fail(Errc::LengthTooShort, "length must be >= 3");
  std::vector<double> outer(length, 2.0), ms(length);
  for (int r = 0; r < length; ++r) ms[r] = std::pow(2.0, r);
  std::map<SeriesId, TailAnnotation> tails;
  tails[SeriesId::InvBoundary] = {TailAnnotation::Kind::Exp, std::log(2.0)};
  return model_from_radial(std::move(outer), std::move(ms), tails);
}

ModelGraph gen_ternary_radial(double eps, int length) {
  if (length < 3) fail(Errc::LengthTooShort, "length must be >= 3");
  if (!(eps > 0.0)) fail(Errc::BadParams, "eps must be positive");
  std::vector<double> outer(length), ms(length);
  for (int r = 0; r < length; ++r) {
    // per-vertex m = (3^r (r+1)^{1+eps})^{-1} over 3^r vertices
    ms[r] = std::pow(r + 1.0, -(1.0 + eps));
    outer[r] = 2.0 * (r + 1.0) / ms[r];  // dB_r = 2(r+1)
  }
  std::map<SeriesId, TailAnnotation> tails;
  tails[SeriesId::InvBoundary] = {TailAnnotation::Kind::Power, 1.0};
  tails[SeriesId::SphereMeasure] = {TailAnnotation::Kind::Power, 1.0 + eps};
  tails[SeriesId::TailMeasureOverBoundary] = {TailAnnotation::Kind::Power, 1.0 + eps};
  tails[SeriesId::BallMeasureOverBoundary] = {TailAnnotation::Kind::Power, 1.0};
  return model_from_radial(std::move(outer), std::move(ms), tails);
}

GeneratedFiles generate_example(const std::string& id, int size, double eps, double c,
                                const std::string& measure_rule,
                                const std::string& out_prefix) {
  GeneratedFiles files;
  if (id == "unit-line") {
    write_graph_file(gen_unit_line(size), files.graph_path = out_prefix + ".graph");
    write_model_file(gen_unit_line_radial(size), files.model_path = out_prefix + ".model");
  } else if (id == "model-example") {
    write_graph_file(gen_model_example(eps, size), files.graph_path = out_prefix + ".graph");
    write_model_file(gen_model_example_radial(eps, size + 1),
                     files.model_path = out_prefix + ".model");
  } else if (id == "binary-tree-unit") {
    write_graph_file(gen_binary_tree(size), files.graph_path = out_prefix + ".graph");
    write_model_file(gen_binary_tree_radial(size + 1),
                     files.model_path = out_prefix + ".model");
  } else if (id == "ternary-anti-example") {
    write_graph_file(gen_ternary_anti_example(eps, size),
                     files.graph_path = out_prefix + ".graph");
    write_model_file(gen_ternary_radial(eps, size + 1),
                     files.model_path = out_prefix + ".model");
  } else if (id == "glued-line") {
    GluedMeasureRule rule;
    if (measure_rule == "feller") rule = GluedMeasureRule::Feller;
    else if (measure_rule == "nonfeller") rule = GluedMeasureRule::NonFeller;
    else fail(Errc::BadParams, "measure rule must be feller|nonfeller");
    write_graph_file(gen_glued_line(c, size, rule),
                     files.graph_path = out_prefix + ".graph");
  } else {
    fail(Errc::UnknownExample, id);
  }
  return files;
}

}  // namespace feller
