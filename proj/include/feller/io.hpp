#pragma once

#include <iosfwd>
#include <string>

#include "feller/graph.hpp"
#include "feller/model.hpp"

namespace feller {

/// Graph file: lines "E <u> <v> <b>", "M <v> <m>", "F <v>", comments "#".
/// Whitespace-separated, order-insensitive.
WeightedGraph parse_graph_file(const std::string& path);
WeightedGraph parse_graph(std::istream& in, const std::string& origin);
void write_graph_file(const WeightedGraph& g, const std::string& path);

/// Radial model file: lines "R <r> <kappa_plus> <m_sphere>", optional
/// "TAIL <series_id> <power|exp> <exponent>"; radii must cover 0..L-1.
ModelGraph parse_model_file(const std::string& path);
ModelGraph parse_model(std::istream& in, const std::string& origin);
void write_model_file(const ModelGraph& mg, const std::string& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace feller
