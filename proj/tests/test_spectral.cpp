#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <set>

#include "feller/generators.hpp"
#include "feller/spectral.hpp"
#include "oracle_utils.hpp"

using namespace feller;

namespace {

// Random connected graph, path-backbone plus chords; weights/measures in
// [0.1, 10].
WeightedGraph random_graph(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> wdist(0.1, 10.0);
  std::uniform_int_distribution<int> back(1, 3);
  std::vector<EdgeSpec> edges;
  std::set<std::pair<int, int>> used;
  std::unordered_map<std::string, double> m;
  m["0"] = wdist(rng);
  for (int i = 1; i < n; ++i) {
    m[std::to_string(i)] = wdist(rng);
    int j = i - std::min(i, back(rng));
    used.insert({j, i});
    edges.push_back({std::to_string(j), std::to_string(i), wdist(rng)});
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int k = 0; k < n / 4; ++k) {
    int a = any(rng), b = any(rng);
    if (a == b) continue;
    if (!used.insert(std::minmax(a, b)).second) continue;
    edges.push_back({std::to_string(a), std::to_string(b), wdist(rng)});
  }
  return WeightedGraph::build(edges, m, {});
}

VertexFunction delta_over_m(const WeightedGraph& g, Vertex v) {
  VertexFunction u0 = VertexFunction::undefined(g.size());
  u0.set(v, 1.0 / g.measure(v));
  return u0;
}

const double kPhi = (3.0 - std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("formal Laplacian basics") {
  WeightedGraph g = gen_unit_line(16);
  VertexFunction cst = VertexFunction::constant(g.size(), 3.5);
  std::vector<Vertex> at{g.vertex("3"), g.vertex("7")};
  VertexFunction lap = apply_formal_laplacian(g, cst, at);
  for (Vertex v : at) CHECK(lap.values[v] == 0.0);

  MetricView mv = metric_view(g, g.vertex("0"));
  VertexFunction rho = VertexFunction::undefined(g.size());
  for (Vertex v = 0; v < g.size(); ++v) rho.set(v, mv.distance[v]);
  VertexFunction lap2 = apply_formal_laplacian(g, rho, {g.vertex("5")});
  CHECK(lap2.values[g.vertex("5")] == 0.0);
  VertexFunction lap3 = apply_formal_laplacian(g, rho, {g.vertex("0")});
  CHECK(lap3.values[g.vertex("0")] == -1.0);

  VertexFunction partial = VertexFunction::undefined(g.size());
  partial.set(g.vertex("3"), 1.0);
  CHECK_THROWS_AS(apply_formal_laplacian(g, partial, {g.vertex("3")}), Error);
  // vertex 15 neighbors the frontier vertex 16
  CHECK_THROWS_WITH_AS(apply_formal_laplacian(g, cst, {g.vertex("15")}),
                       doctest::Contains("FrontierContamination"), Error);
}

TEST_CASE("l2 norm") {
  WeightedGraph g = WeightedGraph::build(
      {{"a", "b", 1.0}, {"b", "c", 1.0}},
      {{"a", 2.0}, {"b", 2.0}, {"c", 2.0}}, {});
  CHECK(l2_norm(g, VertexFunction::constant(g.size(), 0.0)) == 0.0);
  CHECK(l2_norm(g, VertexFunction::constant(g.size(), 1.0)) ==
        doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  WeightedGraph u = gen_unit_line(8);
  VertexFunction ind = VertexFunction::constant(u.size(), 0.0);
  ind.set(u.vertex("0"), 1.0);
  CHECK(l2_norm(u, ind) == 1.0);
}

TEST_CASE("Dirichlet operator of the 3-vertex truncation") {
  WeightedGraph g = WeightedGraph::build(
      {{"0", "1", 1.0}, {"1", "2", 1.0}},
      {{"0", 1.0}, {"1", 1.0}, {"2", 1.0}}, {"2"});
  std::vector<Vertex> all{0, 1, 2};
  SubgraphRegion reg = make_region(g, all);
  REQUIRE(reg.interior == std::vector<Vertex>{0, 1});
  DirichletOperator op = dirichlet_operator(g, reg);

  Eigen::MatrixXd want(2, 2);
  want << 1, -1, -1, 2;
  CHECK((op.sym - want).cwiseAbs().maxCoeff() == 0.0);  // m = 1: symmetrized = raw

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.sym);
  CHECK(eig.eigenvalues()[0] ==
        doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  CHECK(eig.eigenvalues()[1] ==
        doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));

  SubgraphRegion empty = make_region(g, {g.vertex("1")});
  CHECK_THROWS_AS(dirichlet_operator(g, empty), Error);
}

TEST_CASE("Dirichlet operator is symmetric PSD on random instances") {
  std::mt19937 rng(23);
  for (int it = 0; it < 5; ++it) {
    WeightedGraph g = random_graph(rng, 40);
    MetricView mv = metric_view(g, 0);
    DirichletOperator op =
        dirichlet_operator(g, make_region(g, mv.balls[std::min(4, mv.radius())]));
    double asym = (op.sym - op.sym.transpose()).cwiseAbs().maxCoeff();
    double scale = op.sym.cwiseAbs().maxCoeff();
    CHECK(asym <= 1e-14 * scale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.sym);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("heat evolution: eigenvector decay, t=0 identity, mass loss") {
  WeightedGraph g = WeightedGraph::build(
      {{"0", "1", 1.0}, {"1", "2", 1.0}},
      {{"0", 1.0}, {"1", 1.0}, {"2", 1.0}}, {"2"});
  SubgraphRegion reg = make_region(g, {0, 1, 2});
  DirichletOperator op = dirichlet_operator(g, reg);

  double lam0 = (3.0 - std::sqrt(5.0)) / 2.0;
  // unnormalized eigenvector of [[1,-1],[-1,2]] for (3-sqrt5)/2
  VertexFunction u0 = VertexFunction::undefined(g.size());
  u0.set(0, 1.0);
  u0.set(1, 1.0 - lam0);
  HeatEvolution ev = heat_evolve(g, op, u0, {0.0, 0.5, 1.0});
  CHECK(ev.values[0][0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ev.values[0][1] == doctest::Approx(1.0 - lam0).epsilon(1e-13));
  for (std::size_t k = 1; k < ev.times.size(); ++k) {
    double factor = std::exp(-ev.times[k] * lam0);
    CHECK(ev.values[k][0] == doctest::Approx(factor).epsilon(1e-12));
    CHECK(ev.values[k][1] == doctest::Approx((1.0 - lam0) * factor).epsilon(1e-12));
  }

  WeightedGraph line = gen_unit_line(24);
  MetricView mv = metric_view(line, line.vertex("0"));
  DirichletOperator lop = dirichlet_operator(line, make_region(line, mv.balls[10]));
  HeatEvolution lev = heat_evolve(line, lop, delta_over_m(line, line.vertex("0")),
                                  {0.0, 0.25, 1.0, 4.0});
  CHECK(lev.mass[0] == doctest::Approx(1.0).epsilon(1e-13));
  for (std::size_t k = 1; k < lev.mass.size(); ++k) {
    CHECK(lev.mass[k] < 1.0);           // strict Dirichlet loss
    CHECK(lev.mass[k] < lev.mass[k - 1] + 1e-12);
  }

  VertexFunction bad = VertexFunction::undefined(line.size());
  bad.set(line.vertex("20"), 1.0);  // outside the region
  CHECK_THROWS_AS(heat_evolve(line, lop, bad, {1.0}), Error);
  CHECK_THROWS_AS(heat_evolve(line, lop, delta_over_m(line, 0), {1.0, 0.5}), Error);
}

TEST_CASE("heat evolution agrees with a Taylor expm oracle to 1e-10") {
  std::mt19937 rng(5);
  WeightedGraph g = random_graph(rng, 60);
  MetricView mv = metric_view(g, 0);
  int R = 0;
  while (R < mv.radius() && mv.balls[R].size() < 50) ++R;
  DirichletOperator op = dirichlet_operator(g, make_region(g, mv.balls[R]));
  const int n = static_cast<int>(op.interior.size());

  VertexFunction u0 = VertexFunction::undefined(g.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Vertex v : op.interior) u0.set(v, u(rng));

  for (double t : {0.1, 0.7}) {
    HeatEvolution ev = heat_evolve(g, op, u0, {t});
    Eigen::MatrixXd E = oracle::expm_neg(op.sym, t);
    Eigen::VectorXd y0(n);
    for (int i = 0; i < n; ++i) y0[i] = op.sqrt_m[i] * u0.values[op.interior[i]];
    Eigen::VectorXd want = (E * y0).cwiseQuotient(op.sqrt_m);
    CHECK((ev.values[0] - want).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("semigroup composition on a 50-vertex region") {
  WeightedGraph line = gen_unit_line(64);
  MetricView mv = metric_view(line, line.vertex("0"));
  DirichletOperator op = dirichlet_operator(line, make_region(line, mv.balls[50]));
  VertexFunction u0 = delta_over_m(line, line.vertex("3"));

  HeatEvolution first = heat_evolve(line, op, u0, {0.3});
  VertexFunction mid = VertexFunction::undefined(line.size());
  for (std::size_t i = 0; i < op.interior.size(); ++i)
    mid.set(op.interior[i], first.values[0][static_cast<int>(i)]);
  HeatEvolution second = heat_evolve(line, op, mid, {0.7});
  HeatEvolution direct = heat_evolve(line, op, u0, {1.0});
  CHECK((second.values[0] - direct.values[0]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("parabolic maximum principle and positivity on random instances") {
  std::mt19937 rng(31);
  for (int it = 0; it < 4; ++it) {
    WeightedGraph g = random_graph(rng, 50);
    MetricView mv = metric_view(g, 0);
    int R = std::min(3, mv.radius() - 1);
    if (R < 1) continue;
    SubgraphRegion reg = make_region(g, mv.balls[R]);
    if (reg.interior.empty()) continue;
    DirichletOperator op = dirichlet_operator(g, reg);

    VertexFunction u0 = VertexFunction::undefined(g.size());
    std::uniform_real_distribution<double> u(0.0, 2.0);
    double u0max = 0.0;
    for (Vertex v : reg.interior) {
      double x = u(rng);
      u0.set(v, x);
      u0max = std::max(u0max, x);
    }

    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(0.1 * k);
    HeatEvolution ev = heat_evolve(g, op, u0, grid);
    double grid_max = 0.0;
    for (const auto& vals : ev.values) {
      CHECK(vals.minCoeff() >= -1e-12);
      grid_max = std::max(grid_max, vals.maxCoeff());
    }
    // boundary values are 0 and u(.,0) = u0, so the parabolic boundary max
    // is exactly max u0
    CHECK(grid_max <= u0max + 1e-9);
    CHECK(grid_max == doctest::Approx(u0max).epsilon(1e-12));
  }
}

TEST_CASE("heat equation residual drops by >= 3.5x when dt halves") {
  WeightedGraph line = gen_unit_line(24);
  MetricView mv = metric_view(line, line.vertex("0"));
  DirichletOperator op = dirichlet_operator(line, make_region(line, mv.balls[12]));
  VertexFunction u0 = delta_over_m(line, line.vertex("0"));

  auto residual = [&](double dt) {
    double t0 = 0.5;
    HeatEvolution ev = heat_evolve(line, op, u0, {t0, t0 + 0.5 * dt, t0 + dt});
    Eigen::VectorXd dudt = (ev.values[2] - ev.values[0]) / dt;
    Eigen::VectorXd mid_sym = op.sqrt_m.cwiseProduct(ev.values[1]);
    Eigen::VectorXd lap = (op.sym * mid_sym).cwiseQuotient(op.sqrt_m);
    return (lap + dudt).cwiseAbs().maxCoeff();
  };
  double r1 = residual(0.1);
  double r2 = residual(0.05);
  CHECK(r1 / r2 >= 3.5);
  CHECK(residual(0.05) / residual(0.025) >= 3.5);
}

TEST_CASE("kernel estimates: initial value, monotonicity, symmetry") {
  WeightedGraph line = gen_unit_line(40);
  Vertex root = line.vertex("0");
  ExhaustionSequence ex = ball_exhaustion(line, root, {4, 8, 16, 32});

  KernelEstimate k0 = kernel_estimate(line, ex, root, root, 0.0, 1e-9);
  CHECK(k0.limit_estimate == doctest::Approx(1.0 / line.measure(root)).epsilon(1e-12));

  KernelEstimate k1 = kernel_estimate(line, ex, root, root, 1.0, 1e-9);
  for (std::size_t i = 1; i < k1.per_region.size(); ++i)
    CHECK(k1.per_region[i] >= k1.per_region[i - 1] - 1e-12);
  CHECK(k1.converged);

  Vertex v3 = line.vertex("3");
  KernelEstimate kxy = kernel_estimate(line, ex, root, v3, 1.0, 1e-9);
  KernelEstimate kyx = kernel_estimate(line, ex, v3, root, 1.0, 1e-9);
  CHECK(std::abs(kxy.limit_estimate - kyx.limit_estimate) <=
        1e-10 * std::abs(kxy.limit_estimate));

  CHECK_THROWS_AS(kernel_estimate(line, ex, line.vertex("30"), root, 1.0, 1e-9),
                  Error);
}

TEST_CASE("mass probe: unit line approaches 1, decay line plateaus below") {
  WeightedGraph line = gen_unit_line(66);
  Vertex root = line.vertex("0");
  ExhaustionSequence ex = ball_exhaustion(line, root, {4, 8, 16, 32, 64});
  MassProbe mp = mass_probe(line, ex, root, 1.0);
  for (std::size_t i = 1; i < mp.per_region.size(); ++i)
    CHECK(mp.per_region[i] >= mp.per_region[i - 1] - 1e-12);
  CHECK(mp.per_region.back() >= 0.99);
  CHECK(mp.per_region.back() <= 1.0 + 1e-10);
  CHECK(mp.sc_evidence == Evidence::Supports);

  WeightedGraph me = gen_model_example(1.0, 66);
  MassProbe mpm = mass_probe(me, ball_exhaustion(me, me.vertex("0"), {8, 16, 32, 64}),
                             me.vertex("0"), 1.0);
  // frozen oracle values for the Dirichlet masses at t=1
  CHECK(mpm.per_region[0] == doctest::Approx(0.915988875787).epsilon(1e-9));
  CHECK(mpm.per_region.back() == doctest::Approx(0.991442996292).epsilon(1e-9));
  CHECK(mpm.per_region.back() < 0.999);
  CHECK(mpm.sc_evidence == Evidence::Contradicts);

  // t = 0 keeps exactly unit mass
  MassProbe mp0 = mass_probe(line, ex, root, 0.0);
  for (double m : mp0.per_region) CHECK(m == doctest::Approx(1.0).epsilon(1e-12));

  // two summation orders agree
  MetricView mv = metric_view(me, me.vertex("0"));
  DirichletOperator op = dirichlet_operator(me, make_region(me, mv.balls[32]));
  HeatEvolution ev = heat_evolve(me, op, delta_over_m(me, me.vertex("0")), {1.0});
  double fwd = 0.0, rev = 0.0;
  const int n = static_cast<int>(op.interior.size());
  for (int i = 0; i < n; ++i) fwd += ev.values[0][i] * op.m[i];
  for (int i = n - 1; i >= 0; --i) rev += ev.values[0][i] * op.m[i];
  CHECK(std::abs(fwd - rev) <= 1e-12 * std::abs(fwd));
}

TEST_CASE("feller probe separates collapse from retention") {
  WeightedGraph line = gen_unit_line(66);
  Vertex root = line.vertex("0");
  ExhaustionSequence ex = ball_exhaustion(line, root, {8, 16, 32, 64});
  std::vector<int> annuli;
  for (int r = 0; r <= 40; ++r) annuli.push_back(r);

  FellerProbe fp = feller_probe(line, ex, delta_over_m(line, root), 1.0, annuli);
  for (int r = 2; r < 12; ++r) CHECK(fp.sphere_sup[r + 1] < fp.sphere_sup[r]);
  CHECK(fp.sphere_sup[12] == doctest::Approx(3.28407e-10).epsilon(1e-4));
  CHECK(fp.feller_evidence == Evidence::Supports);
  CHECK_FALSE(fp.frontier_contaminated);

  // at t=0 the profile vanishes outside the support
  FellerProbe fp0 = feller_probe(line, ex, delta_over_m(line, root), 0.0, annuli);
  CHECK(fp0.sphere_sup[0] == 1.0);
  for (int r = 1; r <= 40; ++r) CHECK(fp0.sphere_sup[r] == 0.0);

  WeightedGraph me = gen_model_example(1.0, 66);
  FellerProbe fpm = feller_probe(me, ball_exhaustion(me, me.vertex("0"), {8, 16, 32, 64}),
                                 delta_over_m(me, me.vertex("0")), 1.0, annuli);
  // frozen oracle window: strong retention across mid radii
  CHECK(fpm.sphere_sup[10] == doctest::Approx(0.6913854212).epsilon(1e-6));
  CHECK(fpm.sphere_sup[30] == doctest::Approx(0.4347508911).epsilon(1e-6));
  CHECK(fpm.sphere_sup[30] / fpm.sphere_sup[10] > 0.1);
  CHECK(fpm.feller_evidence == Evidence::Contradicts);

  VertexFunction neg = VertexFunction::undefined(line.size());
  neg.set(root, -1.0);
  CHECK_THROWS_AS(feller_probe(line, ex, neg, 1.0, annuli), Error);
}
