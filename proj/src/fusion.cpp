#include "neurobridge/fusion.hpp"

#include <cmath>

namespace nb {

Matrix row_softmax(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Index i = 0; i < scores.rows(); ++i) {
    Vector row = scores.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp();
    out.row(i) = row / row.sum();
  }
  return out;
}

std::pair<Matrix, Matrix> dual_attention(const Matrix& r0, const Matrix& r2,
                                         const FusionParams& params) {
  if (r0.cols() != r2.cols() || r0.rows() != r2.rows()) {
    throw ShapeMismatch("dual_attention: both visits must share shape");
  }
  const Index d = r0.cols();
  if (params.wq.rows() != d || params.wk.rows() != d || params.wv.rows() != d) {
    throw ShapeMismatch("dual_attention: projection shape mismatch");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const double pi = 1.0 / (1.0 + std::exp(-params.upsilon));

  Matrix q0 = r0 * params.wq, k0 = r0 * params.wk, v0 = r0 * params.wv;
  Matrix q2 = r2 * params.wq, k2 = r2 * params.wk, v2 = r2 * params.wv;

  auto fused = [&](const Matrix& q, const Matrix& k_self, const Matrix& v_self,
                   const Matrix& k_cross, const Matrix& v_cross) {
    Matrix self_out = row_softmax(scale * (q * k_self.transpose())) * v_self;
    Matrix cross_out = row_softmax(scale * (q * k_cross.transpose())) * v_cross;
    return (pi * self_out + (1.0 - pi) * cross_out).eval();
  };

  return {fused(q0, k0, v0, k2, v2), fused(q2, k2, v2, k0, v0)};
}

Vector pool(const Matrix& rows) { return rows.colwise().mean(); }

FuseResult fuse_seed(const Vector& r0, const Vector& r2, const FusionParams& params) {
  if (r0.size() != r2.size()) throw ShapeMismatch("fuse_seed: vector size mismatch");
  Vector z(r0.size() + r2.size());
  z << r0, r2;
  Vector h = (params.mix_w1.transpose() * z + params.mix_b1).cwiseMax(0.0);
  Vector logits = params.mix_w2.transpose() * h + params.mix_b2;
  if (logits.size() != 2) throw ShapeMismatch("fuse_seed: mixture head must emit 2 logits");

  Eigen::Vector2d delta;
  const double m = logits.maxCoeff();
  delta << std::exp(logits[0] - m), std::exp(logits[1] - m);
  delta /= delta.sum();

  FuseResult out;
  out.delta = delta;
  out.r_seed = delta[0] * r0 + delta[1] * r2;
  return out;
}

}  // namespace nb
