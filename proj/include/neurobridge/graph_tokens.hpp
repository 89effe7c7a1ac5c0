#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "neurobridge/symmat.hpp"

namespace nb {

/// kNN graph of one visit together with its normalized operators and
/// per-edge RBF weights. Edges are unordered pairs (i < j).
struct VisitGraph {
  Matrix adjacency;        // binary, symmetric, zero diagonal
  std::vector<std::pair<int, int>> edges;
  Matrix norm_adjacency;   // Gamma^{-1/2} G Gamma^{-1/2}
  Matrix laplacian;        // I - norm_adjacency
  EigenPair laplacian_eig; // cached spectrum of the laplacian
  Vector rbf;              // per-edge weight in (0, 1]
  double bandwidth = 0.0;
};

/// Multi-scale heat-kernel tokens: tokens[0] is the raw feature matrix,
/// tokens[s] = exp(-theta_s J) * tokens[0].
struct TokenStack {
  std::vector<Matrix> tokens;
  Vector thetas;
};

/// Directed kNN by Euclidean distance on the feature rows, symmetrized by
/// union. Ties broken toward the lower index. Fills rbf weights with the
/// median-distance bandwidth.
VisitGraph build_knn_graph(const Matrix& features, int k);

/// Gaussian RBF weights exp(-||y_i - y_j||^2 / (2 w^2)) per edge. The
/// bandwidth defaults to the median edge distance, floored at 1e-8.
Vector rbf_weights(const Matrix& features, const std::vector<std::pair<int, int>>& edges,
                   std::optional<double> bandwidth = std::nullopt,
                   double* bandwidth_out = nullptr);

TokenStack heat_tokens(const Matrix& ytilde, const VisitGraph& graph, const Vector& thetas);

/// Row-wise projection ReLU([tokens_0 | ... | tokens_S] W + b).
Matrix row_project(const TokenStack& stack, const Matrix& weight, const Vector& bias);

}  // namespace nb
