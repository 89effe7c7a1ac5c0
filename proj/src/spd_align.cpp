#include "neurobridge/spd_align.hpp"

namespace nb {

namespace {

double min_eigenvalue(const SymMatrix& s) { return sym_eig(s).values[0]; }

}  // namespace

SymMatrix spd_regularize(const Matrix& b, double epsilon) {
  if (!b.allFinite()) throw NonFinite("spd_regularize: non-finite entry in input");
  if (epsilon < 0.0) throw DomainError("spd_regularize: epsilon must be >= 0");
  Matrix out = symmetrize(b);
  out.diagonal().array() += epsilon;
  SymMatrix result(out);
  if (min_eigenvalue(result) <= 0.0) {
    throw NotSPD("spd_regularize: output not positive definite; increase epsilon");
  }
  return result;
}

SymMatrix geodesic_midpoint(const SymMatrix& b0, const SymMatrix& b2) {
  if (b0.size() != b2.size()) throw ShapeMismatch("geodesic_midpoint: dimension mismatch");
  SymMatrix sqrt0 = spd_sqrt(b0);
  SymMatrix invsqrt0 = spd_invsqrt(b0);
  SymMatrix whitened(invsqrt0.mat() * b2.mat() * invsqrt0.mat());
  SymMatrix inner = spd_sqrt(whitened);
  return SymMatrix(sqrt0.mat() * inner.mat() * sqrt0.mat());
}

SymMatrix tangent_embed(const SymMatrix& bbar, const SymMatrix& anchor) {
  if (bbar.size() != anchor.size()) throw ShapeMismatch("tangent_embed: dimension mismatch");
  SymMatrix invsqrt_a = spd_invsqrt(anchor);
  SymMatrix whitened(invsqrt_a.mat() * bbar.mat() * invsqrt_a.mat());
  return spd_logm(whitened);
}

SymMatrix trace_deflate(const SymMatrix& y) {
  Matrix out = y.mat();
  out.diagonal().array() -= out.trace() / static_cast<double>(out.rows());
  return SymMatrix(out);
}

TangentPair align_pair(const Matrix& b0, const Matrix& b2, double epsilon) {
  SymMatrix bbar0 = spd_regularize(b0, epsilon);
  SymMatrix bbar2 = spd_regularize(b2, epsilon);

  SymMatrix raw0(b0);
  SymMatrix raw2(b2);
  SymMatrix anchor;
  if (min_eigenvalue(raw0) > 0.0 && min_eigenvalue(raw2) > 0.0) {
    anchor = geodesic_midpoint(raw0, raw2);
  } else {
    anchor = geodesic_midpoint(bbar0, bbar2);
  }

  TangentPair pair;
  pair.anchor = anchor;
  pair.y0 = trace_deflate(tangent_embed(bbar0, anchor));
  pair.y2 = trace_deflate(tangent_embed(bbar2, anchor));
  pair.epsilon = epsilon;
  return pair;
}

}  // namespace nb
