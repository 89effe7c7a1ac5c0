#pragma once

#include <array>

#include "neurobridge/types.hpp"

namespace nb {

/// Spectrally bounded latent operator Phi diag(tanh chi) Phi^{-1} plus the
/// behavior MLP F -> D -> D producing per-visit offsets.
struct KoopmanParams {
  Matrix phi;
  Vector chi;
  Matrix mlp_w1;  // F x D
  Vector mlp_b1;
  Matrix mlp_w2;  // D x D
  Vector mlp_b2;
  int t_steps = 2;
  std::array<int, 2> visit_schedule{0, 2};
};

inline constexpr double kMaxPhiCondition = 1e8;

/// 2-norm condition number.
double condition_number(const Matrix& m);

/// U = Phi diag(tanh chi) Phi^{-1}. When cond(Phi) exceeds the cap the
/// assembly retries once with Phi + 1e-6 I, then throws IllConditioned.
Matrix assemble_operator(const KoopmanParams& params);

/// Behavior offset m = MLP_c(c), two layers with an inner ReLU.
Vector behavior_offset(const Vector& behavior, const KoopmanParams& params);

/// Two-step rollout: r1 = U seed + m0, r2 = U r1 + m2.
std::pair<Vector, Vector> rollout(const Vector& r_seed, const Matrix& u, const Vector& m0,
                                  const Vector& m2);

}  // namespace nb
