#include "neurobridge/encoder.hpp"

namespace nb {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vector gate_mlp(const Matrix& z, const EdgeGateParams& p) {
  Matrix h = ((z * p.w1).rowwise() + p.b1.transpose()).cwiseMax(0.0);
  Vector s = h * p.w2 + Vector::Constant(h.rows(), p.b2[0]);
  return s.unaryExpr([](double x) { return sigmoid(x); });
}

}  // namespace

Matrix gcn_layer(const Matrix& x, const Matrix& norm_adj, const GcnLayerParams& params,
                 Activation activation) {
  if (norm_adj.cols() != x.rows()) throw ShapeMismatch("gcn_layer: adjacency/feature mismatch");
  if (x.cols() != params.weight.rows()) throw ShapeMismatch("gcn_layer: weight shape mismatch");
  if (params.bias.size() != params.weight.cols()) throw ShapeMismatch("gcn_layer: bias size");
  Matrix out = ((norm_adj * x) * params.weight).rowwise() + params.bias.transpose();
  if (activation == Activation::relu) out = out.cwiseMax(0.0);
  return out;
}

Vector edge_gates(const Matrix& r1, const std::vector<std::pair<int, int>>& edges,
                  const EdgeGateParams& params) {
  const auto m = static_cast<Index>(edges.size());
  const Index d = r1.cols();
  Matrix z_fwd(m, 2 * d), z_rev(m, 2 * d);
  for (Index e = 0; e < m; ++e) {
    z_fwd.row(e) << r1.row(edges[e].first), r1.row(edges[e].second);
    z_rev.row(e) << r1.row(edges[e].second), r1.row(edges[e].first);
  }
  return 0.5 * (gate_mlp(z_fwd, params) + gate_mlp(z_rev, params));
}

Matrix reweight_adjacency(const VisitGraph& graph, const Vector& gates) {
  const Index n = graph.adjacency.rows();
  if (gates.size() != static_cast<Index>(graph.edges.size())) {
    throw ShapeMismatch("reweight_adjacency: one gate per edge required");
  }
  Matrix gstar = Matrix::Zero(n, n);
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    const double w = gates[static_cast<Index>(e)] * graph.rbf[static_cast<Index>(e)];
    gstar(graph.edges[e].first, graph.edges[e].second) = w;
    gstar(graph.edges[e].second, graph.edges[e].first) = w;
  }
  Vector degree = gstar.rowwise().sum();
  if ((degree.array() <= 1e-12).any()) {
    throw DegenerateGraph("reweight_adjacency: reweighted degree underflow");
  }
  Vector dinv_sqrt = degree.array().rsqrt();
  return symmetrize(dinv_sqrt.asDiagonal() * gstar * dinv_sqrt.asDiagonal());
}

EncodeResult encode_visit(const Matrix& ybreve, const VisitGraph& graph,
                          const EncoderParams& params, const Matrix* dropout_mask) {
  EncodeResult out;
  out.r1 = gcn_layer(ybreve, graph.norm_adjacency, params.gcn1, Activation::relu);
  if (dropout_mask) {
    if (dropout_mask->rows() != out.r1.rows() || dropout_mask->cols() != out.r1.cols()) {
      throw ShapeMismatch("encode_visit: dropout mask shape mismatch");
    }
    out.r1 = out.r1.cwiseProduct(*dropout_mask);
  }
  out.gates = edge_gates(out.r1, graph.edges, params.gate);
  out.gated_rbf = out.gates.cwiseProduct(graph.rbf);
  out.norm_adj_star = reweight_adjacency(graph, out.gates);
  out.r = gcn_layer(out.r1, out.norm_adj_star, params.gcn2, Activation::linear);
  return out;
}

}  // namespace nb
