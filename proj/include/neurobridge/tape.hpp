#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "neurobridge/symmat.hpp"

namespace nb {
namespace ad {

/// Handle to a node on a Tape.
struct Var {
  int id = -1;
};

/// Append-only reverse-mode tape over dense matrices. Vectors are 1xD or
/// Dx1 matrices, scalars are 1x1. Node order is topological by
/// construction; appending a node whose parent does not yet exist throws
/// GraphCycle.
class Tape {
 public:
  Var constant(Matrix value) { return emplace(std::move(value), false, {}); }
  Var param(Matrix value) { return emplace(std::move(value), true, {}); }

  const Matrix& val(Var v) const { return nodes_[check(v)].value; }
  bool requires_grad(Var v) const { return nodes_[check(v)].requires_grad; }

  /// Gradient of the last backward() seed w.r.t. v; empty if none reached it.
  const Matrix& grad(Var v) const;
  bool has_grad(Var v) const { return nodes_[check(v)].grad.size() > 0; }

  /// Reverse accumulation from `seed_node` with d(seed)/d(seed) = seed.
  void backward(Var seed_node, double seed = 1.0);

  int size() const { return static_cast<int>(nodes_.size()); }
  void reserve(size_t n) { nodes_.reserve(n); }

  // Construction helpers used by the op layer.
  Var emplace(Matrix value, bool requires_grad, std::initializer_list<Var> parents);
  void set_backward(Var v, std::function<void(Tape&)> fn);
  void accumulate(Var v, const Matrix& g);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::function<void(Tape&)> backward;
  };

  int check(Var v) const;
  std::vector<Node> nodes_;
};

// ---- Ops ----------------------------------------------------------------

Var add(Tape& t, Var a, Var b);
Var sub(Tape& t, Var a, Var b);
Var mul(Tape& t, Var a, Var b);  // elementwise
Var matmul(Tape& t, Var a, Var b);
Var transpose(Tape& t, Var a);
/// alpha * a + beta, elementwise with double constants.
Var affine(Tape& t, Var a, double alpha, double beta);
/// Scale matrix `a` by 1x1 scalar node `s`.
Var scale(Tape& t, Var s, Var a);
/// X (N x D) + row vector b (1 x D) broadcast over rows.
Var add_rowvec(Tape& t, Var x, Var b);

Var relu(Tape& t, Var a);
Var sigmoid(Tape& t, Var a);
Var tanh_op(Tape& t, Var a);
Var softplus(Tape& t, Var a);
Var pow_elem(Tape& t, Var a, double p);

Var row_softmax_op(Tape& t, Var a);
Var sum_all(Tape& t, Var a);       // 1x1
Var col_mean(Tape& t, Var a);      // N x D -> 1 x D
Var row_sum(Tape& t, Var a);       // N x M -> N x 1
Var concat_cols(Tape& t, const std::vector<Var>& parts);
Var slice_cols(Tape& t, Var a, Index start, Index len);
Var gather_rows(Tape& t, Var a, std::vector<int> rows);
/// Scatters per-edge values (Ex1) symmetrically onto an NxN zero-diagonal matrix.
Var scatter_sym(Tape& t, Var edge_vals, const std::vector<std::pair<int, int>>& edges, Index n);
/// Row vector (1xD) divided by its Euclidean norm.
Var l2_normalize(Tape& t, Var a);
Var diag_vec(Tape& t, Var a);      // Dx1 or 1xD -> DxD diagonal
Var inverse(Tape& t, Var a);
/// exp(-theta * J) from the cached spectrum of J; theta is a 1x1 node.
Var heat_kernel(Tape& t, Var theta, const EigenPair& laplacian_eig);

}  // namespace ad
}  // namespace nb
