// Test-only oracles, deliberately independent of the library's numerical
// paths: plain-queue BFS, Taylor scaling-and-squaring matrix exponential,
// Gaussian elimination with partial pivoting.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <vector>

#include "feller/graph.hpp"

namespace oracle {

inline std::vector<int> bfs_distances(const feller::WeightedGraph& g, feller::Vertex root) {
  std::vector<int> dist(g.size(), -1);
  dist[root] = 0;
  std::deque<feller::Vertex> q{root};
  while (!q.empty()) {
    feller::Vertex v = q.front();
    q.pop_front();
    for (auto [w, b] : g.neighbors(v)) {
      (void)b;
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

// e^{-tA} by Taylor series with scaling and squaring; no eigensolver.
inline Eigen::MatrixXd expm_neg(const Eigen::MatrixXd& A, double t) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd B = -t * A;
  double norm = B.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  B /= std::pow(2.0, squarings);
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * B) / static_cast<double>(k);
    E += term;
    if (term.cwiseAbs().maxCoeff() < 1e-19) break;
  }
  for (int s = 0; s < squarings; ++s) E = E * E;
  return E;
}

// Gaussian elimination with partial pivoting on a dense system.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= A[r][c] * x[c];
    x[r] = acc / A[r][r];
  }
  return x;
}

}  // namespace oracle
