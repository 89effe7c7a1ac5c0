#pragma once

#include <Eigen/Dense>

#include "neurobridge/errors.hpp"

namespace nb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Exact symmetrization: out(i,j) == out(j,i) bit for bit, since both
/// entries are computed as 0.5*(a+b) with identical operands.
Matrix symmetrize(const Matrix& m);

/// Dense symmetric matrix. Symmetrized on construction so the symmetry
/// invariant holds exactly afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  const Matrix& mat() const { return m_; }
  Index size() const { return m_.rows(); }

 private:
  Matrix m_;
};

}  // namespace nb
