#include "neurobridge/koopman.hpp"

#include <Eigen/SVD>

namespace nb {

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

Matrix assemble_operator(const KoopmanParams& params) {
  if (params.phi.rows() != params.phi.cols() || params.chi.size() != params.phi.rows()) {
    throw ShapeMismatch("assemble_operator: phi must be DxD with chi of size D");
  }
  Matrix phi = params.phi;
  if (condition_number(phi) > kMaxPhiCondition) {
    phi.diagonal().array() += 1e-6;
    if (condition_number(phi) > kMaxPhiCondition) {
      throw IllConditioned("assemble_operator: cond(phi) exceeds 1e8 after ridge retry");
    }
  }
  Vector sigma = params.chi.array().tanh();
  return phi * sigma.asDiagonal() * phi.partialPivLu().inverse();
}

Vector behavior_offset(const Vector& behavior, const KoopmanParams& params) {
  if (behavior.size() != params.mlp_w1.rows()) {
    throw ShapeMismatch("behavior_offset: behavior dimension mismatch");
  }
  Vector h = (params.mlp_w1.transpose() * behavior + params.mlp_b1).cwiseMax(0.0);
  return params.mlp_w2.transpose() * h + params.mlp_b2;
}

std::pair<Vector, Vector> rollout(const Vector& r_seed, const Matrix& u, const Vector& m0,
                                  const Vector& m2) {
  if (u.cols() != r_seed.size()) throw ShapeMismatch("rollout: operator/seed mismatch");
  Vector r1 = u * r_seed + m0;
  Vector r2 = u * r1 + m2;
  return {r1, r2};
}

}  // namespace nb
