#pragma once

#include <vector>

#include "neurobridge/types.hpp"

namespace nb {

/// Deviation projector phi (2D -> D, ReLU) plus the scalar logit head.
struct ClassifierParams {
  Matrix proj_w;
  Vector proj_b;
  Vector head_w;
  double head_b = 0.0;
};

/// Unit-norm class prototypes with EMA momentum and per-class temperatures.
struct PrototypeState {
  Vector nu0, nu1;
  bool init0 = false, init1 = false;
  double momentum = 0.97;  // zeta
  double temp_pos = 0.08;  // class 1
  double temp_neg = 0.12;  // class 0
};

struct LossWeights {
  double eta_dyn = 0.25;
  double eta_con = 0.10;
  double beta_plus = 1.0;
};

struct ClassifyResult {
  double logit = 0.0;
  Vector g_cls;
};

/// g_cls = ReLU(W_phi [r_hat2; r2 - r_hat2] + b), logit = head(g_cls).
ClassifyResult classify(const Vector& r_hat2, const Vector& r2, const ClassifierParams& params);

/// Class-weighted BCE on the logit, computed in the stable softplus form.
double weighted_bce(double logit, int y, double beta_plus);

double stable_softplus(double x);

/// Squared Euclidean distance between predicted and observed latents.
double dyn_loss(const Vector& r_hat2, const Vector& r2);

/// Prototype-contrastive loss softplus(kappa_other - kappa_own) with
/// temperature-scaled cosine logits. Requires both prototypes initialized.
double proto_loss(const Vector& g_cls, int y, const PrototypeState& state);

/// EMA update from gradient-detached normalized features. Classes absent
/// from the batch are left unchanged; prototypes stay unit norm.
void proto_update(PrototypeState& state, const std::vector<Vector>& features,
                  const std::vector<int>& labels);

double total_loss(double sup, double dyn, double proto, const LossWeights& weights);

struct Metrics {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double balanced_accuracy() const { return 0.5 * (sensitivity + specificity); }
};

/// Thresholded confusion metrics; prediction is positive when y_hat > threshold.
Metrics metrics(const std::vector<double>& predictions, const std::vector<int>& labels,
                double threshold = 0.5);

}  // namespace nb
