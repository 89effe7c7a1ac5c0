#include "neurobridge/graph_tokens.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nb {

VisitGraph build_knn_graph(const Matrix& features, int k) {
  const int n = static_cast<int>(features.rows());
  if (!features.allFinite()) throw NonFinite("build_knn_graph: non-finite feature");
  if (k < 1 || n < k + 1) {
    throw DegenerateGraph("build_knn_graph: need n >= k+1 with k >= 1");
  }

  Matrix sqdist(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sqdist(i, j) = (features.row(i) - features.row(j)).squaredNorm();
    }
  }

  VisitGraph g;
  g.adjacency = Matrix::Zero(n, n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    // nearest k neighbors of i, ties toward the lower index
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (sqdist(i, a) != sqdist(i, b)) return sqdist(i, a) < sqdist(i, b);
      return a < b;
    });
    int taken = 0;
    for (int j : order) {
      if (j == i) continue;
      g.adjacency(i, j) = 1.0;
      if (++taken == k) break;
    }
  }
  g.adjacency = g.adjacency.cwiseMax(g.adjacency.transpose().eval());  // union

  Vector degree = g.adjacency.rowwise().sum();
  if ((degree.array() <= 0.0).any()) {
    throw DegenerateGraph("build_knn_graph: isolated node");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.adjacency(i, j) > 0.0) g.edges.emplace_back(i, j);
    }
  }

  Vector dinv_sqrt = degree.array().rsqrt();
  g.norm_adjacency = dinv_sqrt.asDiagonal() * g.adjacency * dinv_sqrt.asDiagonal();
  g.norm_adjacency = symmetrize(g.norm_adjacency);
  g.laplacian = Matrix::Identity(n, n) - g.norm_adjacency;
  g.laplacian_eig = sym_eig(SymMatrix(g.laplacian));
  g.rbf = rbf_weights(features, g.edges, std::nullopt, &g.bandwidth);
  return g;
}

Vector rbf_weights(const Matrix& features, const std::vector<std::pair<int, int>>& edges,
                   std::optional<double> bandwidth, double* bandwidth_out) {
  const auto m = static_cast<Index>(edges.size());
  Vector dist(m);
  for (Index e = 0; e < m; ++e) {
    dist[e] = (features.row(edges[e].first) - features.row(edges[e].second)).norm();
  }

  double w;
  if (bandwidth) {
    w = *bandwidth;
    if (w <= 0.0) throw DomainError("rbf_weights: bandwidth must be > 0");
  } else {
    std::vector<double> sorted(dist.data(), dist.data() + m);
    std::sort(sorted.begin(), sorted.end());
    w = m == 0 ? 0.0 : 0.5 * (sorted[(m - 1) / 2] + sorted[m / 2]);
  }
  w = std::max(w, 1e-8);
  if (bandwidth_out) *bandwidth_out = w;

  return (-dist.array().square() / (2.0 * w * w)).exp();
}

TokenStack heat_tokens(const Matrix& ytilde, const VisitGraph& graph, const Vector& thetas) {
  if (ytilde.rows() != graph.laplacian.rows()) {
    throw ShapeMismatch("heat_tokens: feature rows must match graph size");
  }
  if ((thetas.array() < 0.0).any()) throw DomainError("heat_tokens: thetas must be >= 0");

  TokenStack stack;
  stack.thetas = thetas;
  stack.tokens.reserve(static_cast<size_t>(thetas.size()) + 1);
  stack.tokens.push_back(ytilde);
  const Vector& lam = graph.laplacian_eig.values;
  const Matrix& v = graph.laplacian_eig.vectors;
  for (Index s = 0; s < thetas.size(); ++s) {
    Vector decay = (-thetas[s] * lam.array()).exp();
    Matrix diffusion = symmetrize(v * decay.asDiagonal() * v.transpose());
    stack.tokens.push_back(diffusion * ytilde);
  }
  return stack;
}

Matrix row_project(const TokenStack& stack, const Matrix& weight, const Vector& bias) {
  const Index n = stack.tokens.front().rows();
  Index width = 0;
  for (const Matrix& t : stack.tokens) width += t.cols();
  if (weight.rows() != width) {
    throw ShapeMismatch("row_project: weight rows != concatenated token width");
  }
  if (bias.size() != weight.cols()) throw ShapeMismatch("row_project: bias size mismatch");

  Matrix concat(n, width);
  Index col = 0;
  for (const Matrix& t : stack.tokens) {
    concat.middleCols(col, t.cols()) = t;
    col += t.cols();
  }
  Matrix out = (concat * weight).rowwise() + bias.transpose();
  return out.cwiseMax(0.0);
}

}  // namespace nb
