#pragma once

#include "neurobridge/symmat.hpp"

namespace nb {

/// Midpoint anchor plus the deflated tangent images of both visits.
struct TangentPair {
  SymMatrix anchor;
  SymMatrix y0;
  SymMatrix y2;
  double epsilon = 0.0;
};

/// Ridge regularization: symmetrize(B) + epsilon*I. Throws NotSPD when the
/// result still has a non-positive eigenvalue.
SymMatrix spd_regularize(const Matrix& b, double epsilon);

/// Affine-invariant geodesic midpoint B0^{1/2} (B0^{-1/2} B2 B0^{-1/2})^{1/2} B0^{1/2}.
SymMatrix geodesic_midpoint(const SymMatrix& b0, const SymMatrix& b2);

/// Whitened principal matrix logarithm Logm(A^{-1/2} Bbar A^{-1/2}).
SymMatrix tangent_embed(const SymMatrix& bbar, const SymMatrix& anchor);

/// Removes the isotropic mode: Y - (tr(Y)/N) I. Trace-free to machine precision.
SymMatrix trace_deflate(const SymMatrix& y);

/// Full alignment of one visit pair. The anchor is computed from the raw
/// symmetrized inputs when those are already SPD, and from the ridged ones
/// otherwise; the tangent embeddings always use the ridged matrices. Rows of
/// the deflated images are the per-node features.
TangentPair align_pair(const Matrix& b0, const Matrix& b2, double epsilon);

}  // namespace nb
