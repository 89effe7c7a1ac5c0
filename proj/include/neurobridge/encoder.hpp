#pragma once

#include "neurobridge/graph_tokens.hpp"

namespace nb {

struct GcnLayerParams {
  Matrix weight;
  Vector bias;
};

/// Two-layer perceptron 2D -> D -> 1 producing one pre-sigmoid score per
/// directed edge evaluation.
struct EdgeGateParams {
  Matrix w1;
  Vector b1;
  Matrix w2;  // D x 1
  Vector b2;  // 1
};

struct EncoderParams {
  GcnLayerParams gcn1;
  GcnLayerParams gcn2;
  EdgeGateParams gate;
};

enum class Activation { relu, linear };

/// act(norm_adj * X * W + b)
Matrix gcn_layer(const Matrix& x, const Matrix& norm_adj, const GcnLayerParams& params,
                 Activation activation);

/// Per unordered edge: mean of the two directed sigmoid(MLP([r_i; r_j]))
/// evaluations, so the gate is symmetric by construction. Values in (0, 1).
Vector edge_gates(const Matrix& r1, const std::vector<std::pair<int, int>>& edges,
                  const EdgeGateParams& params);

/// Scatters gate * rbf onto the edge set and renormalizes:
/// D*^{-1/2} G* D*^{-1/2} with D* recomputed from the reweighted graph.
Matrix reweight_adjacency(const VisitGraph& graph, const Vector& gates);

struct EncodeResult {
  Matrix r1;             // after GCN1 (and dropout when a mask is given)
  Matrix r;              // final embeddings after GCN2
  Vector gates;          // per-edge g
  Vector gated_rbf;      // per-edge g * rbf
  Matrix norm_adj_star;  // reweighted normalized adjacency
};

/// GCN1 (ReLU) -> edge gates -> RBF modulation -> renormalization -> GCN2
/// (linear). A dropout mask (entries 0 or 1/keep) applies to the GCN1 output.
EncodeResult encode_visit(const Matrix& ybreve, const VisitGraph& graph,
                          const EncoderParams& params, const Matrix* dropout_mask = nullptr);

}  // namespace nb
