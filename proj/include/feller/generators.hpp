#pragma once

#include <string>

#include "feller/graph.hpp"
#include "feller/model.hpp"

namespace feller {

/// Truncations of the bundled infinite graphs. Every generated graph marks
/// the cut with a frontier flag at the outermost layer.

/// Line over 0..size with unit weights and measures; frontier {size}.
WeightedGraph gen_unit_line(int size);

/// Line over 0..size with unit weights and m(r) = (r+1)^{-(2+eps)}.
WeightedGraph gen_model_example(double eps, int size);

/// Rooted tree, every vertex two forward neighbors, unit weights/measures,
/// truncated at `depth` generations (frontier = last generation).
WeightedGraph gen_binary_tree(int depth);

/// Rooted tree with three forward neighbors per vertex,
/// b = 2(r+1)/3^{r+1} between generations r and r+1, per-vertex measure
/// m = (3^r (r+1)^{1+eps})^{-1}; truncated at `depth` generations.
WeightedGraph gen_ternary_anti_example(double eps, int depth);

enum class GluedMeasureRule { Feller, NonFeller };

/// The eps=1 line with a pendant x_r attached to each vertex 1 < r <= size
/// by b(r, x_r) = c/(r-1). Rule Feller: m(x_r) = (r(r-1))^{-1}; rule
/// NonFeller: m(x_r) = (r(r-1)(r+2))^{-1}. With c = 0 the pendant edges
/// have zero weight, i.e. do not exist, and the graph is the bare line.
WeightedGraph gen_glued_line(double c, int size, GluedMeasureRule rule);

/// Radial counterparts with certified tail annotations.
ModelGraph gen_unit_line_radial(int length);
ModelGraph gen_model_example_radial(double eps, int length);
ModelGraph gen_binary_tree_radial(int length);
ModelGraph gen_ternary_radial(double eps, int length);

struct GeneratedFiles {
  std::string graph_path;  // empty if not produced
  std::string model_path;  // empty if not produced
};

/// Writes the files for a named bundled example. Ids: unit-line,
/// model-example, binary-tree-unit, ternary-anti-example, glued-line.
GeneratedFiles generate_example(const std::string& id, int size, double eps, double c,
                                const std::string& measure_rule,
                                const std::string& out_prefix);

}  // namespace feller
