#pragma once

#include "neurobridge/types.hpp"

namespace nb {

/// Shared attention projections, the scalar gate pre-activation, and the
/// mixture MLP 2D -> D -> 2.
struct FusionParams {
  Matrix wq, wk, wv;
  double upsilon = 0.0;  // gate pi = sigmoid(upsilon)
  Matrix mix_w1;
  Vector mix_b1;
  Matrix mix_w2;
  Vector mix_b2;
};

/// Row-wise softmax with the usual max-shift stabilization.
Matrix row_softmax(const Matrix& scores);

/// Dual-time fusion: for each visit, pi * self-attention + (1-pi) *
/// cross-attention, single head, scores scaled by 1/sqrt(D).
std::pair<Matrix, Matrix> dual_attention(const Matrix& r0, const Matrix& r2,
                                         const FusionParams& params);

/// Mean over the node rows.
Vector pool(const Matrix& rows);

struct FuseResult {
  Vector r_seed;
  Eigen::Vector2d delta;
};

/// delta = softmax(MLP([r0; r2])), r_seed = delta_0 r0 + delta_1 r2.
FuseResult fuse_seed(const Vector& r0, const Vector& r2, const FusionParams& params);

}  // namespace nb
