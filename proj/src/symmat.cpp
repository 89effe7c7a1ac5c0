#include "neurobridge/symmat.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>

namespace nb {

namespace {
std::atomic<long> g_floor_warnings{0};
}

long floor_warning_count() { return g_floor_warnings.load(); }
void reset_floor_warning_count() { g_floor_warnings.store(0); }

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ShapeMismatch("SymMatrix: square matrix of dimension >= 1 required");
  }
  m_ = symmetrize(m);
}

EigenPair sym_eig(const SymMatrix& s) {
  if (!s.mat().allFinite()) throw NonFinite("sym_eig: non-finite entry in input");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.mat());
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("sym_eig: eigendecomposition did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

SymMatrix spectral_apply(const SymMatrix& s, const std::function<double(double)>& f,
                         double floor, EigDomain domain) {
  EigenPair ep = sym_eig(s);
  Vector mapped(ep.values.size());
  for (Index i = 0; i < ep.values.size(); ++i) {
    double lam = ep.values[i];
    if (floor > 0.0 && lam < floor) {
      lam = floor;
      g_floor_warnings.fetch_add(1, std::memory_order_relaxed);
    }
    if (domain == EigDomain::positive && lam <= 0.0) {
      throw DomainError("spectral_apply: eigenvalue " + std::to_string(ep.values[i]) +
                        " not positive after flooring");
    }
    if (domain == EigDomain::nonnegative && lam < 0.0) {
      throw DomainError("spectral_apply: eigenvalue " + std::to_string(ep.values[i]) +
                        " negative after flooring");
    }
    mapped[i] = f(lam);
  }
  Matrix out = ep.vectors * mapped.asDiagonal() * ep.vectors.transpose();
  return SymMatrix(out);
}

SymMatrix spd_sqrt(const SymMatrix& s, double floor) {
  return spectral_apply(s, [](double x) { return std::sqrt(x); }, floor,
                        EigDomain::nonnegative);
}

SymMatrix spd_invsqrt(const SymMatrix& s, double floor) {
  return spectral_apply(s, [](double x) { return 1.0 / std::sqrt(x); }, floor,
                        EigDomain::positive);
}

SymMatrix spd_logm(const SymMatrix& s, double floor) {
  return spectral_apply(s, [](double x) { return std::log(x); }, floor,
                        EigDomain::positive);
}

SymMatrix spd_inv(const SymMatrix& s, double floor) {
  return spectral_apply(s, [](double x) { return 1.0 / x; }, floor, EigDomain::positive);
}

SymMatrix sym_expm(const SymMatrix& s) {
  return spectral_apply(s, [](double x) { return std::exp(x); });
}

}  // namespace nb
