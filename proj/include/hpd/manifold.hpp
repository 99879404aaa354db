#pragma once

#include "hpd/hermitian.hpp"

namespace hpd {

/// Orthonormal frame of the tangent space at p under the affine-invariant
/// metric. With p = U diag(lambda) U*, the frame map is F = U diag(sqrt lambda),
/// and a point x is represented by its whitened form F^{-1} x F^{-*}, which is
/// unitarily similar to p^{-1/2} x p^{-1/2}. Frobenius norms and inner products
/// of whitened tangent vectors equal Riemannian ones at p.
class NormalFrame {
 public:
  explicit NormalFrame(const HpdMatrix& p);

  std::size_t dim() const { return u_.dim(); }

  /// F^{-1} h F^{-*}; maps a tangent vector at p to whitened coordinates.
  HermitianMatrix whiten(const HermitianMatrix& h) const;
  /// F v F*; inverse of whiten.
  HermitianMatrix unwhiten(const HermitianMatrix& v) const;

  /// Whitened logarithm Log(F^{-1} x F^{-*}); its Frobenius norm is dist(p, x).
  /// When x is far worse conditioned than p, F^{-1} x F^{-*} = G G* with
  /// G = F^{-1} U_x diag(sqrt(lambda_x)) is factored by one-sided Jacobi, which
  /// is insensitive to the column grading of G.
  HermitianMatrix log(const HpdMatrix& x) const;
  /// dist(p, x) using eigenvalues only.
  double distance(const HpdMatrix& x) const;
  /// F Exp(v) F* = Exp_p(unwhiten(v)).
  HpdMatrix exp(const HermitianMatrix& v) const;

 private:
  bool graded_path(const HpdMatrix& x) const;
  /// Columns: singular vectors of G scaled by the singular values.
  CMatrix graded_factor(const HpdMatrix& x) const;

  CMatrix u_;
  double cond_;
  RealVector sqrt_lambda_;
  RealVector inv_sqrt_lambda_;
};

/// <h1, h2>_p = Tr((p^{-1/2} * h1)(p^{-1/2} * h2)).
double inner(const HpdMatrix& p, const HermitianMatrix& h1, const HermitianMatrix& h2);
/// ||h||_p.
double riemannian_norm(const HpdMatrix& p, const HermitianMatrix& h);

/// ||Log(p1^{-1/2} * p2)||_F. The better-conditioned matrix is whitened by
/// the worse-conditioned one, which keeps the result accurate for large spreads.
double dist(const HpdMatrix& p1, const HpdMatrix& p2);

/// p^{1/2} Exp(p^{-1/2} h p^{-1/2}) p^{1/2}. Throws NumericalFailure on overflow.
HpdMatrix exp_map(const HpdMatrix& p, const HermitianMatrix& h);
/// p^{1/2} Log(p^{-1/2} q p^{-1/2}) p^{1/2}.
HermitianMatrix log_map(const HpdMatrix& p, const HpdMatrix& q);
/// Point at fraction t along the geodesic from p to q.
HpdMatrix geodesic(const HpdMatrix& p, const HpdMatrix& q, double t);

}  // namespace hpd
