#include "neurobridge/tape.hpp"

#include <cmath>

namespace nb {
namespace ad {

int Tape::check(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
    throw GraphCycle("tape: node handle out of range");
  }
  return v.id;
}

Var Tape::emplace(Matrix value, bool requires_grad, std::initializer_list<Var> parents) {
  for (Var p : parents) check(p);
  nodes_.push_back(Node{std::move(value), Matrix(), requires_grad, nullptr});
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::set_backward(Var v, std::function<void(Tape&)> fn) {
  nodes_[check(v)].backward = std::move(fn);
}

void Tape::accumulate(Var v, const Matrix& g) {
  Node& n = nodes_[check(v)];
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

const Matrix& Tape::grad(Var v) const {
  const Node& n = nodes_[check(v)];
  if (n.grad.size() == 0) throw Error("tape: no gradient recorded for node");
  return n.grad;
}

void Tape::backward(Var seed_node, double seed) {
  Node& top = nodes_[check(seed_node)];
  if (top.value.size() != 1) throw ShapeMismatch("backward: seed node must be scalar");
  if (!top.requires_grad) return;
  if (top.grad.size() == 0) top.grad = Matrix::Zero(1, 1);
  top.grad(0, 0) += seed;
  for (int id = seed_node.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.grad.size() != 0 && n.backward) n.backward(*this);
  }
}

namespace {

bool any_grad(Tape& t, std::initializer_list<Var> vs) {
  for (Var v : vs) {
    if (t.requires_grad(v)) return true;
  }
  return false;
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch(op);
}

}  // namespace

Var add(Tape& t, Var a, Var b) {
  check_same_shape(t.val(a), t.val(b), "add: shape mismatch");
  bool rg = any_grad(t, {a, b});
  Var out = t.emplace(t.val(a) + t.val(b), rg, {a, b});
  if (rg) {
    t.set_backward(out, [a, b, out](Tape& tt) {
      tt.accumulate(a, tt.grad(out));
      tt.accumulate(b, tt.grad(out));
    });
  }
  return out;
}

Var sub(Tape& t, Var a, Var b) {
  check_same_shape(t.val(a), t.val(b), "sub: shape mismatch");
  bool rg = any_grad(t, {a, b});
  Var out = t.emplace(t.val(a) - t.val(b), rg, {a, b});
  if (rg) {
    t.set_backward(out, [a, b, out](Tape& tt) {
      tt.accumulate(a, tt.grad(out));
      tt.accumulate(b, -tt.grad(out));
    });
  }
  return out;
}

Var mul(Tape& t, Var a, Var b) {
  check_same_shape(t.val(a), t.val(b), "mul: shape mismatch");
  bool rg = any_grad(t, {a, b});
  Var out = t.emplace(t.val(a).cwiseProduct(t.val(b)), rg, {a, b});
  if (rg) {
    t.set_backward(out, [a, b, out](Tape& tt) {
      tt.accumulate(a, tt.grad(out).cwiseProduct(tt.val(b)));
      tt.accumulate(b, tt.grad(out).cwiseProduct(tt.val(a)));
    });
  }
  return out;
}

Var matmul(Tape& t, Var a, Var b) {
  if (t.val(a).cols() != t.val(b).rows()) throw ShapeMismatch("matmul: inner dim mismatch");
  bool rg = any_grad(t, {a, b});
  Var out = t.emplace(t.val(a) * t.val(b), rg, {a, b});
  if (rg) {
    t.set_backward(out, [a, b, out](Tape& tt) {
      const Matrix& g = tt.grad(out);
      if (tt.requires_grad(a)) tt.accumulate(a, g * tt.val(b).transpose());
      if (tt.requires_grad(b)) tt.accumulate(b, tt.val(a).transpose() * g);
    });
  }
  return out;
}

Var transpose(Tape& t, Var a) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace(t.val(a).transpose(), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) { tt.accumulate(a, tt.grad(out).transpose()); });
  }
  return out;
}

Var affine(Tape& t, Var a, double alpha, double beta) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace((alpha * t.val(a).array() + beta).matrix(), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out, alpha](Tape& tt) { tt.accumulate(a, alpha * tt.grad(out)); });
  }
  return out;
}

Var scale(Tape& t, Var s, Var a) {
  if (t.val(s).size() != 1) throw ShapeMismatch("scale: scalar node must be 1x1");
  bool rg = any_grad(t, {s, a});
  Var out = t.emplace(t.val(s)(0, 0) * t.val(a), rg, {s, a});
  if (rg) {
    t.set_backward(out, [s, a, out](Tape& tt) {
      const Matrix& g = tt.grad(out);
      if (tt.requires_grad(s)) {
        Matrix gs(1, 1);
        gs(0, 0) = g.cwiseProduct(tt.val(a)).sum();
        tt.accumulate(s, gs);
      }
      if (tt.requires_grad(a)) tt.accumulate(a, tt.val(s)(0, 0) * g);
    });
  }
  return out;
}

Var add_rowvec(Tape& t, Var x, Var b) {
  if (t.val(b).rows() != 1 || t.val(b).cols() != t.val(x).cols()) {
    throw ShapeMismatch("add_rowvec: bias must be 1 x cols(x)");
  }
  bool rg = any_grad(t, {x, b});
  Matrix v = t.val(x).rowwise() + t.val(b).row(0);
  Var out = t.emplace(std::move(v), rg, {x, b});
  if (rg) {
    t.set_backward(out, [x, b, out](Tape& tt) {
      const Matrix& g = tt.grad(out);
      if (tt.requires_grad(x)) tt.accumulate(x, g);
      if (tt.requires_grad(b)) tt.accumulate(b, g.colwise().sum());
    });
  }
  return out;
}

Var relu(Tape& t, Var a) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace(t.val(a).cwiseMax(0.0), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      Matrix mask = (tt.val(a).array() > 0.0).cast<double>();
      tt.accumulate(a, tt.grad(out).cwiseProduct(mask));
    });
  }
  return out;
}

Var sigmoid(Tape& t, Var a) {
  Matrix v = t.val(a).unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(v), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      const Matrix& s = tt.val(out);
      Matrix d = s.array() * (1.0 - s.array());
      tt.accumulate(a, tt.grad(out).cwiseProduct(d));
    });
  }
  return out;
}

Var tanh_op(Tape& t, Var a) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace(t.val(a).array().tanh().matrix(), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      Matrix d = 1.0 - tt.val(out).array().square();
      tt.accumulate(a, tt.grad(out).cwiseProduct(d));
    });
  }
  return out;
}

Var softplus(Tape& t, Var a) {
  Matrix v = t.val(a).unaryExpr(
      [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); });
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(v), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      Matrix d = tt.val(a).unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
      tt.accumulate(a, tt.grad(out).cwiseProduct(d));
    });
  }
  return out;
}

Var pow_elem(Tape& t, Var a, double p) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace(t.val(a).array().pow(p).matrix(), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out, p](Tape& tt) {
      Matrix d = p * tt.val(a).array().pow(p - 1.0);
      tt.accumulate(a, tt.grad(out).cwiseProduct(d));
    });
  }
  return out;
}

Var row_softmax_op(Tape& t, Var a) {
  const Matrix& x = t.val(a);
  Matrix v(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    Eigen::RowVectorXd row = x.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp();
    v.row(i) = row / row.sum();
  }
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(v), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      const Matrix& s = tt.val(out);
      const Matrix& g = tt.grad(out);
      Matrix d(s.rows(), s.cols());
      for (Index i = 0; i < s.rows(); ++i) {
        const double dot = s.row(i).dot(g.row(i));
        d.row(i) = s.row(i).cwiseProduct(g.row(i).array().matrix()) - dot * s.row(i);
      }
      tt.accumulate(a, d);
    });
  }
  return out;
}

Var sum_all(Tape& t, Var a) {
  Matrix v(1, 1);
  v(0, 0) = t.val(a).sum();
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(v), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      const double g = tt.grad(out)(0, 0);
      tt.accumulate(a, Matrix::Constant(tt.val(a).rows(), tt.val(a).cols(), g));
    });
  }
  return out;
}

Var col_mean(Tape& t, Var a) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace(t.val(a).colwise().mean(), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      const Index n = tt.val(a).rows();
      Matrix g = tt.grad(out) / static_cast<double>(n);
      tt.accumulate(a, g.replicate(n, 1));
    });
  }
  return out;
}

Var row_sum(Tape& t, Var a) {
  bool rg = t.requires_grad(a);
  Var out = t.emplace(t.val(a).rowwise().sum(), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      const Index m = tt.val(a).cols();
      tt.accumulate(a, tt.grad(out).replicate(1, m));
    });
  }
  return out;
}

Var concat_cols(Tape& t, const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols: no parts");
  const Index rows = t.val(parts[0]).rows();
  Index cols = 0;
  bool rg = false;
  for (Var p : parts) {
    if (t.val(p).rows() != rows) throw ShapeMismatch("concat_cols: row mismatch");
    cols += t.val(p).cols();
    rg = rg || t.requires_grad(p);
  }
  Matrix v(rows, cols);
  Index at = 0;
  for (Var p : parts) {
    v.middleCols(at, t.val(p).cols()) = t.val(p);
    at += t.val(p).cols();
  }
  Var out = t.emplace(std::move(v), rg, {});
  for (Var p : parts) {
    if (p.id >= out.id) throw GraphCycle("concat_cols: parent appended after child");
  }
  if (rg) {
    std::vector<Var> ps = parts;
    t.set_backward(out, [ps, out](Tape& tt) {
      const Matrix& g = tt.grad(out);
      Index at2 = 0;
      for (Var p : ps) {
        const Index w = tt.val(p).cols();
        tt.accumulate(p, g.middleCols(at2, w));
        at2 += w;
      }
    });
  }
  return out;
}

Var slice_cols(Tape& t, Var a, Index start, Index len) {
  const Matrix& x = t.val(a);
  if (start < 0 || len < 1 || start + len > x.cols()) {
    throw ShapeMismatch("slice_cols: range out of bounds");
  }
  bool rg = t.requires_grad(a);
  Var out = t.emplace(x.middleCols(start, len), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out, start, len](Tape& tt) {
      Matrix g = Matrix::Zero(tt.val(a).rows(), tt.val(a).cols());
      g.middleCols(start, len) = tt.grad(out);
      tt.accumulate(a, g);
    });
  }
  return out;
}

Var gather_rows(Tape& t, Var a, std::vector<int> rows) {
  const Matrix& x = t.val(a);
  Matrix v(static_cast<Index>(rows.size()), x.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= x.rows()) throw ShapeMismatch("gather_rows: index range");
    v.row(static_cast<Index>(i)) = x.row(rows[i]);
  }
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(v), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out, rows = std::move(rows)](Tape& tt) {
      Matrix g = Matrix::Zero(tt.val(a).rows(), tt.val(a).cols());
      const Matrix& go = tt.grad(out);
      for (size_t i = 0; i < rows.size(); ++i) {
        g.row(rows[i]) += go.row(static_cast<Index>(i));
      }
      tt.accumulate(a, g);
    });
  }
  return out;
}

Var scatter_sym(Tape& t, Var edge_vals, const std::vector<std::pair<int, int>>& edges,
                Index n) {
  const Matrix& e = t.val(edge_vals);
  if (e.cols() != 1 || e.rows() != static_cast<Index>(edges.size())) {
    throw ShapeMismatch("scatter_sym: edge values must be Ex1");
  }
  Matrix v = Matrix::Zero(n, n);
  for (size_t k = 0; k < edges.size(); ++k) {
    v(edges[k].first, edges[k].second) = e(static_cast<Index>(k), 0);
    v(edges[k].second, edges[k].first) = e(static_cast<Index>(k), 0);
  }
  bool rg = t.requires_grad(edge_vals);
  Var out = t.emplace(std::move(v), rg, {edge_vals});
  if (rg) {
    auto es = edges;
    t.set_backward(out, [edge_vals, out, es = std::move(es)](Tape& tt) {
      const Matrix& g = tt.grad(out);
      Matrix ge(static_cast<Index>(es.size()), 1);
      for (size_t k = 0; k < es.size(); ++k) {
        ge(static_cast<Index>(k), 0) = g(es[k].first, es[k].second) + g(es[k].second, es[k].first);
      }
      tt.accumulate(edge_vals, ge);
    });
  }
  return out;
}

Var l2_normalize(Tape& t, Var a) {
  const Matrix& x = t.val(a);
  if (x.rows() != 1) throw ShapeMismatch("l2_normalize: expects a row vector");
  const double norm = x.norm();
  if (norm <= 1e-12) throw DegenerateFeature("l2_normalize: norm underflow");
  bool rg = t.requires_grad(a);
  Var out = t.emplace(x / norm, rg, {a});
  if (rg) {
    t.set_backward(out, [a, out, norm](Tape& tt) {
      const Matrix& xhat = tt.val(out);
      const Matrix& g = tt.grad(out);
      const double dot = (g.cwiseProduct(xhat)).sum();
      tt.accumulate(a, (g - dot * xhat) / norm);
    });
  }
  return out;
}

Var diag_vec(Tape& t, Var a) {
  const Matrix& x = t.val(a);
  if (x.rows() != 1 && x.cols() != 1) throw ShapeMismatch("diag_vec: expects a vector");
  const Index d = x.size();
  Matrix v = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) v(i, i) = x(x.rows() == 1 ? 0 : i, x.rows() == 1 ? i : 0);
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(v), rg, {a});
  if (rg) {
    t.set_backward(out, [a, out](Tape& tt) {
      const Matrix& g = tt.grad(out);
      Matrix ga = tt.val(a);
      for (Index i = 0; i < ga.size(); ++i) {
        ga(ga.rows() == 1 ? 0 : i, ga.rows() == 1 ? i : 0) = g(i, i);
      }
      tt.accumulate(a, ga);
    });
  }
  return out;
}

Var inverse(Tape& t, Var a) {
  const Matrix& x = t.val(a);
  if (x.rows() != x.cols()) throw ShapeMismatch("inverse: square matrix required");
  Matrix inv = x.partialPivLu().inverse();
  bool rg = t.requires_grad(a);
  Var out = t.emplace(std::move(inv), rg, {a});
  if (rg) {
    // d(A^{-1}) = -A^{-1} dA A^{-1}
    t.set_backward(out, [a, out](Tape& tt) {
      const Matrix& p = tt.val(out);
      tt.accumulate(a, -p.transpose() * tt.grad(out) * p.transpose());
    });
  }
  return out;
}

Var heat_kernel(Tape& t, Var theta, const EigenPair& laplacian_eig) {
  if (t.val(theta).size() != 1) throw ShapeMismatch("heat_kernel: theta must be 1x1");
  const double th = t.val(theta)(0, 0);
  const Vector& lam = laplacian_eig.values;
  const Matrix& v = laplacian_eig.vectors;
  Vector decay = (-th * lam.array()).exp();
  Matrix value = symmetrize(v * decay.asDiagonal() * v.transpose());
  bool rg = t.requires_grad(theta);
  Var out = t.emplace(std::move(value), rg, {theta});
  if (rg) {
    Vector dlam = (-lam.array()) * decay.array();
    Matrix dtheta_mat = symmetrize(v * dlam.asDiagonal() * v.transpose());
    t.set_backward(out, [theta, out, dtheta_mat = std::move(dtheta_mat)](Tape& tt) {
      Matrix g(1, 1);
      g(0, 0) = tt.grad(out).cwiseProduct(dtheta_mat).sum();
      tt.accumulate(theta, g);
    });
  }
  return out;
}

}  // namespace ad
}  // namespace nb
