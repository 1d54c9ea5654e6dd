#include "feller/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace feller {

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) fail(Errc::BadParams, "cannot format value");
  return std::string(buf, ptr);
}

namespace {

double parse_number(const std::string& tok, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail(Errc::ParseError, where + ": bad number '" + tok + "'");
  return v;
}

long parse_integer(const std::string& tok, const std::string& where) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail(Errc::ParseError, where + ": bad integer '" + tok + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::ParseError, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

WeightedGraph parse_graph(std::istream& in, const std::string& origin) {
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::string, double> measures;
  std::vector<std::string> frontier;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (tag == "E") {
      std::string u, v, b;
      if (!(ls >> u >> v >> b)) fail(Errc::ParseError, where + ": E needs <u> <v> <b>");
      edges.push_back({u, v, parse_number(b, where)});
    } else if (tag == "M") {
      std::string v, m;
      if (!(ls >> v >> m)) fail(Errc::ParseError, where + ": M needs <v> <m>");
      if (!measures.emplace(v, parse_number(m, where)).second)
        fail(Errc::ParseError, where + ": duplicate measure for " + v);
    } else if (tag == "F") {
      std::string v;
      if (!(ls >> v)) fail(Errc::ParseError, where + ": F needs <v>");
      frontier.push_back(v);
    } else {
      fail(Errc::ParseError, where + ": unknown tag '" + tag + "'");
    }
  }
  return WeightedGraph::build(edges, measures, frontier);
}

WeightedGraph parse_graph_file(const std::string& path) {
  auto in = open_input(path);
  return parse_graph(in, path);
}

void write_graph_file(const WeightedGraph& g, const std::string& path) {
  auto out = open_output(path);
  out << "# weighted graph truncation\n";
  for (Vertex v = 0; v < g.size(); ++v)
    for (auto [w, b] : g.neighbors(v))
      if (v < w)
        out << "E " << g.name(v) << " " << g.name(w) << " " << format_double(b) << "\n";
  for (Vertex v = 0; v < g.size(); ++v)
    out << "M " << g.name(v) << " " << format_double(g.measure(v)) << "\n";
  for (Vertex v : g.frontier_vertices()) out << "F " << g.name(v) << "\n";
}

ModelGraph parse_model(std::istream& in, const std::string& origin) {
  std::map<long, std::pair<double, double>> rows;
  std::map<SeriesId, TailAnnotation> tails;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    std::string where = origin + ":" + std::to_string(lineno);
    if (tag == "R") {
      std::string r, kp, ms;
      if (!(ls >> r >> kp >> ms)) fail(Errc::ParseError, where + ": R needs <r> <k+> <m>");
      long radius = parse_integer(r, where);
      if (radius < 0) fail(Errc::ParseError, where + ": negative radius");
      if (!rows.emplace(radius, std::make_pair(parse_number(kp, where),
                                               parse_number(ms, where))).second)
        fail(Errc::ParseError, where + ": duplicate radius " + r);
    } else if (tag == "TAIL") {
      std::string id, kind, expo;
      if (!(ls >> id >> kind >> expo))
        fail(Errc::ParseError, where + ": TAIL needs <series_id> <kind> <exponent>");
      auto sid = parse_series_id(id);
      if (!sid) fail(Errc::ParseError, where + ": unknown series id '" + id + "'");
      TailAnnotation ta;
      if (kind == "power") ta.kind = TailAnnotation::Kind::Power;
      else if (kind == "exp") ta.kind = TailAnnotation::Kind::Exp;
      else fail(Errc::ParseError, where + ": tail kind must be power|exp");
      ta.exponent = parse_number(expo, where);
      tails[*sid] = ta;
    } else {
      fail(Errc::ParseError, where + ": unknown tag '" + tag + "'");
    }
  }
  if (rows.empty()) fail(Errc::ParseError, origin + ": no radial rows");
  long expect = 0;
  std::vector<double> outer, ms;
  for (const auto& [r, km] : rows) {
    if (r != expect)
      fail(Errc::ParseError, origin + ": radii must cover 0..L-1, missing " +
                                 std::to_string(expect));
    ++expect;
    outer.push_back(km.first);
    ms.push_back(km.second);
  }
  return model_from_radial(std::move(outer), std::move(ms), std::move(tails));
}

ModelGraph parse_model_file(const std::string& path) {
  auto in = open_input(path);
  return parse_model(in, path);
}

void write_model_file(const ModelGraph& mg, const std::string& path) {
  auto out = open_output(path);
  out << "# radial model data\n";
  for (int r = 0; r < mg.length; ++r)
    out << "R " << r << " " << format_double(mg.outer_curv[r]) << " "
        << format_double(mg.sphere_measure[r]) << "\n";
  for (const auto& [id, ta] : mg.tails)
    out << "TAIL " << series_id_name(id) << " "
        << (ta.kind == TailAnnotation::Kind::Power ? "power" : "exp") << " "
        << format_double(ta.exponent) << "\n";
}

}  // namespace feller
