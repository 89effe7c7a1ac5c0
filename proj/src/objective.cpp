#include "neurobridge/objective.hpp"

#include <cmath>

namespace nb {

double stable_softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

ClassifyResult classify(const Vector& r_hat2, const Vector& r2, const ClassifierParams& params) {
  if (r_hat2.size() != r2.size()) throw ShapeMismatch("classify: latent size mismatch");
  Vector cat(2 * r_hat2.size());
  cat << r_hat2, (r2 - r_hat2);
  if (params.proj_w.rows() != cat.size()) throw ShapeMismatch("classify: projector shape");
  ClassifyResult out;
  out.g_cls = (params.proj_w.transpose() * cat + params.proj_b).cwiseMax(0.0);
  out.logit = params.head_w.dot(out.g_cls) + params.head_b;
  return out;
}

double weighted_bce(double logit, int y, double beta_plus) {
  if (beta_plus <= 0.0) throw DomainError("weighted_bce: beta_plus must be > 0");
  // -log(sigmoid(l)) = softplus(-l), -log(1 - sigmoid(l)) = softplus(l)
  return y == 1 ? beta_plus * stable_softplus(-logit) : stable_softplus(logit);
}

double dyn_loss(const Vector& r_hat2, const Vector& r2) {
  if (r_hat2.size() != r2.size()) throw ShapeMismatch("dyn_loss: size mismatch");
  return (r_hat2 - r2).squaredNorm();
}

double proto_loss(const Vector& g_cls, int y, const PrototypeState& state) {
  const double norm = g_cls.norm();
  if (norm <= 1e-12) throw DegenerateFeature("proto_loss: feature norm underflow");
  if (!state.init0 || !state.init1) {
    throw DomainError("proto_loss: prototypes not initialized");
  }
  Vector ghat = g_cls / norm;
  const double kappa1 = ghat.dot(state.nu1) / state.temp_pos;
  const double kappa0 = ghat.dot(state.nu0) / state.temp_neg;
  const double own = y == 1 ? kappa1 : kappa0;
  const double other = y == 1 ? kappa0 : kappa1;
  return stable_softplus(other - own);
}

void proto_update(PrototypeState& state, const std::vector<Vector>& features,
                  const std::vector<int>& labels) {
  if (features.size() != labels.size()) throw ShapeMismatch("proto_update: batch mismatch");
  for (int c = 0; c < 2; ++c) {
    Vector sum;
    long count = 0;
    for (size_t i = 0; i < features.size(); ++i) {
      if (labels[i] != c) continue;
      const double n = features[i].norm();
      if (n <= 1e-12) throw DegenerateFeature("proto_update: feature norm underflow");
      if (count == 0) sum = features[i] / n;
      else sum += features[i] / n;
      ++count;
    }
    if (count == 0) continue;
    Vector mean = sum / static_cast<double>(count);
    Vector& nu = c == 1 ? state.nu1 : state.nu0;
    bool& init = c == 1 ? state.init1 : state.init0;
    Vector blended = init ? (state.momentum * nu + (1.0 - state.momentum) * mean).eval() : mean;
    const double bn = blended.norm();
    if (bn <= 1e-12) throw DegenerateFeature("proto_update: blended prototype underflow");
    nu = blended / bn;
    init = true;
  }
}

double total_loss(double sup, double dyn, double proto, const LossWeights& weights) {
  if (weights.eta_dyn < 0.0 || weights.eta_con < 0.0 || !std::isfinite(weights.eta_dyn) ||
      !std::isfinite(weights.eta_con)) {
    throw DomainError("total_loss: weights must be finite and >= 0");
  }
  return sup + weights.eta_dyn * dyn + weights.eta_con * proto;
}

Metrics metrics(const std::vector<double>& predictions, const std::vector<int>& labels,
                double threshold) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw ShapeMismatch("metrics: nonempty matched vectors required");
  }
  long tp = 0, tn = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] > threshold;
    if (labels[i] == 1) {
      pred ? ++tp : ++fn;
    } else {
      pred ? ++fp : ++tn;
    }
  }
  if (tp + fn == 0 || tn + fp == 0) {
    throw UndefinedMetric("metrics: both classes must be present");
  }
  Metrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(predictions.size());
  m.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return m;
}

}  // namespace nb
