#pragma once

#include <Eigen/Dense>
#include <unordered_map>
#include <vector>

#include "feller/graph.hpp"

namespace feller {

/// Function on a subset of the vertex set. Entries with defined[v]==0 carry
/// no value; operations that need a value at an undefined vertex fail with
/// MissingValue.
struct VertexFunction {
  std::vector<double> values;
  std::vector<char> defined;

  static VertexFunction undefined(Vertex n) {
    return {std::vector<double>(n, 0.0), std::vector<char>(n, 0)};
  }
  static VertexFunction constant(Vertex n, double c) {
    return {std::vector<double>(n, c), std::vector<char>(n, 1)};
  }
  void set(Vertex v, double x) {
    values[v] = x;
    defined[v] = 1;
  }
  bool has(Vertex v) const { return defined[v] != 0; }
  double at(Vertex v) const {
    if (!defined[v]) fail(Errc::MissingValue, "vertex " + std::to_string(v));
    return values[v];
  }
};

/// (Delta f)(x) = (1/m(x)) sum_y b(x,y)(f(x) - f(y)) at each vertex of `at`.
/// Every vertex of `at` must be non-frontier with f defined on it and all
/// its neighbors.
VertexFunction apply_formal_laplacian(const WeightedGraph& g, const VertexFunction& f,
                                      const std::vector<Vertex>& at);

/// sqrt( sum_x f(x)^2 m(x) ); f must be defined everywhere.
double l2_norm(const WeightedGraph& g, const VertexFunction& f);

/// Dirichlet Laplacian on a region: acts on functions over the interior
/// with zero extension to the boundary. Stored in the symmetrized form
/// D^{1/2} Delta_n D^{-1/2}, D = diag(m), together with the measures needed
/// to map back.
struct DirichletOperator {
  SubgraphRegion region;
  std::vector<Vertex> interior;   // ordering of the unknowns
  std::vector<int> pos;           // host vertex -> interior index, -1 outside
  Eigen::MatrixXd sym;            // symmetric positive semidefinite
  Eigen::VectorXd sqrt_m;
  Eigen::VectorXd m;
};

DirichletOperator dirichlet_operator(const WeightedGraph& g, const SubgraphRegion& region);

/// Values of e^{-t Delta_n} u0 across a time grid, with mass and l2
/// diagnostics. values[k] lives on op.interior; the evolution is zero on
/// the region boundary for t>0.
struct HeatEvolution {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;
  std::vector<double> mass;    // sum_y u(y,t) m(y)
  std::vector<double> l2norm;  // sqrt(sum u^2 m)
  std::vector<Vertex> interior;
};

HeatEvolution heat_evolve(const WeightedGraph& g, const DirichletOperator& op,
                          const VertexFunction& u0, const std::vector<double>& times);

/// p_t(x,y) carries the 1/m(y) convention: P_t f(x) = sum_y p_t(x,y) f(y) m(y).
struct KernelEstimate {
  Vertex source = -1;
  Vertex target = -1;
  double time = 0.0;
  std::vector<double> per_region;  // nondecreasing along the exhaustion
  double limit_estimate = 0.0;
  bool converged = false;
  double gap = 0.0;
};

KernelEstimate kernel_estimate(const WeightedGraph& g, const ExhaustionSequence& ex,
                               Vertex x, Vertex y, double t, double tol);

enum class Evidence { Supports, Contradicts, Inconclusive };
const char* evidence_name(Evidence e);

/// Per-region total heat sum_y p_t^n(x,y) m(y); nondecreasing in n and
/// bounded by 1. A plateau strictly below 1 is evidence (never a
/// certificate) of stochastic incompleteness at truncation scale.
struct MassProbe {
  std::vector<double> per_region;
  Evidence sc_evidence = Evidence::Inconclusive;
  bool frontier_contaminated = false;
};

MassProbe mass_probe(const WeightedGraph& g, const ExhaustionSequence& ex, Vertex x,
                     double t);

/// Sup of u(.,t) over each listed sphere S_R, evolving u0 on the final
/// region. Radii whose values cannot be trusted near the cut are flagged.
struct FellerProbe {
  std::vector<int> radii;
  std::vector<double> sphere_sup;
  std::vector<char> contaminated;
  bool frontier_contaminated = false;
  Evidence feller_evidence = Evidence::Inconclusive;
};

FellerProbe feller_probe(const WeightedGraph& g, const ExhaustionSequence& ex,
                         const VertexFunction& u0, double t, const std::vector<int>& annuli);

}  // namespace feller
