#pragma once

#include <functional>

#include "neurobridge/types.hpp"

namespace nb {

/// Ascending eigenvalues and orthonormal eigenvectors of a symmetric matrix.
struct EigenPair {
  Vector values;
  Matrix vectors;
};

/// Deterministic symmetric eigendecomposition (ascending eigenvalues).
EigenPair sym_eig(const SymMatrix& s);

enum class EigDomain { any, nonnegative, positive };

/// Default eigenvalue floor for functions that need positive spectra.
inline constexpr double kEigFloor = 1e-10;

/// Number of times an eigenvalue had to be raised to the floor so far.
long floor_warning_count();
void reset_floor_warning_count();

/// Applies f to the spectrum: V diag(f(max(lambda, floor))) V^T, symmetrized.
/// floor == 0 disables flooring. Throws DomainError when the (floored)
/// spectrum violates the requested domain.
SymMatrix spectral_apply(const SymMatrix& s, const std::function<double(double)>& f,
                         double floor = 0.0, EigDomain domain = EigDomain::any);

SymMatrix spd_sqrt(const SymMatrix& s, double floor = kEigFloor);
SymMatrix spd_invsqrt(const SymMatrix& s, double floor = kEigFloor);
SymMatrix spd_logm(const SymMatrix& s, double floor = kEigFloor);
SymMatrix spd_inv(const SymMatrix& s, double floor = kEigFloor);
SymMatrix sym_expm(const SymMatrix& s);

}  // namespace nb
