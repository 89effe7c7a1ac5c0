#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "neurobridge/types.hpp"

namespace nb {

/// Flat registry of named trainable tensors. Names are unique and stable;
/// iteration order is insertion order.
class ModelParams {
 public:
  struct Entry {
    std::string name;
    Matrix value;
    bool decay = true;  // weight decay applies
  };

  void add(std::string name, Matrix value, bool decay);
  Matrix& at(const std::string& name);
  const Matrix& at(const std::string& name) const;
  int index(const std::string& name) const;

  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> by_name_;
};

/// Model dimensions derived from configuration and data.
struct Dims {
  int n_nodes = 53;     // N
  int n_behavior = 6;   // F
  int s_steps = 2;      // S
  int d0 = 96;
  int d = 96;
};

/// Training configuration; defaults follow the reference settings.
struct TrainConfig {
  double lr = 1e-4;
  double weight_decay = 5e-4;
  int batch_size = 64;
  double dropout = 0.40;
  int epochs = 60;
  int k = 5;
  int s_steps = 2;
  int d0 = 96;
  int d = 96;
  double epsilon = 1e-3;
  double pi_init = 0.5;
  double eta_dyn = 0.25;
  double eta_con = 0.10;
  double zeta = 0.97;
  double temp_pos = 0.08;
  double temp_neg = 0.12;
  std::uint64_t seed = 0;
  int folds = 5;
  int threads = 4;
  // Ablation switches for the synthetic-benchmark comparisons.
  bool euclidean = false;
  bool zero_behavior = false;
};

/// Stable 64-bit FNV-1a, used to derive per-tensor RNG seeds from names.
std::uint64_t fnv1a64(const std::string& text);

/// Kaiming-style fan-in initialization; biases zero, upsilon from pi_init,
/// phi near identity, chi uniform in (-0.5, 0.5). Seeds derive from the run
/// seed and the tensor name.
ModelParams init_params(const Dims& dims, std::uint64_t seed, double pi_init);

/// Softplus pre-image, used to store positive scales as free parameters.
double softplus_inverse(double y);

}  // namespace nb
