#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "hpd/errors.hpp"

namespace hpd {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Storage is inline up to 4x4, which
/// covers the matrix sizes that dominate the simulation workloads.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, Complex(0.0, 0.0)) {}

  static CMatrix identity(std::size_t dim);
  static CMatrix diagonal(std::span<const double> diag);
  /// Real and imaginary parts given as row-major d*d arrays.
  static CMatrix from_parts(std::size_t dim, std::span<const double> re,
                            std::span<const double> im = {});

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  std::span<const Complex> data() const { return {a_.data(), a_.size()}; }

  CMatrix adjoint() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(double s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= s; }
  friend CMatrix operator*(double s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t dim_ = 0;
  boost::container::small_vector<Complex, 16> a_;
};

/// Hermitian matrix: an element of the real vector space of tangent vectors.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  /// Validates Hermitian symmetry to 1e-12 (relative to the largest entry),
  /// then stores (m + m*)/2.
  explicit HermitianMatrix(const CMatrix& m);

  /// Projects onto the Hermitian part without the symmetry check. For results
  /// of internal computations that are Hermitian up to rounding.
  static HermitianMatrix symmetrized(const CMatrix& m);
  static HermitianMatrix zero(std::size_t dim);
  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return m_.dim(); }
  const CMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.frobenius_norm(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  struct Unchecked {};
  HermitianMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Frobenius inner product Re Tr(a b); real for Hermitian arguments.
double frobenius_inner(const HermitianMatrix& a, const HermitianMatrix& b);

using RealVector = boost::container::small_vector<double, 4>;

struct Eigensystem {
  RealVector eigenvalues;  // ascending
  CMatrix eigenvectors;    // unitary; column k pairs with eigenvalues[k]
};

/// Cyclic complex Jacobi. Off-diagonal entries are annihilated until
/// |a_pq| <= eps * sqrt(|a_pp a_qq|), which keeps small eigenvalues of graded
/// positive definite matrices accurate to high relative precision.
/// Throws NumericalFailure after 30*d sweeps without convergence.
Eigensystem eigh(const HermitianMatrix& m);
RealVector eigvalsh(const HermitianMatrix& m);

/// U diag(f(lambda)) U*. Throws DomainError if f is not finite at an eigenvalue.
HermitianMatrix matrix_function(const Eigensystem& es, const std::function<double(double)>& f);
HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f);

/// Matrix exponential of a Hermitian matrix. Throws NumericalFailure when an
/// eigenvalue exceeds kMaxExpArgument.
HermitianMatrix expm(const HermitianMatrix& h);
inline constexpr double kMaxExpArgument = 700.0;

class HpdMatrix;
class BasisCoordinates;

/// Canonical Frobenius-orthonormal basis of d x d Hermitian matrices:
/// E_ii for each i, then for each i<j the pair (E_ij+E_ji)/sqrt2, i(E_ij-E_ji)/sqrt2.
std::vector<HermitianMatrix> hermitian_basis(std::size_t d);

/// Coordinates of a Hermitian matrix in the canonical basis (length d^2).
class BasisCoordinates {
 public:
  BasisCoordinates(std::size_t dim, std::vector<double> coords);
  std::size_t dim() const { return dim_; }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t k) const { return coords_[k]; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

BasisCoordinates to_coordinates(const HermitianMatrix& m);
/// Writes the d^2 coordinates into out (no allocation); out.size() must be d^2.
void to_coordinates(const HermitianMatrix& m, std::span<double> out);
HermitianMatrix from_coordinates(const BasisCoordinates& c);

/// Hermitian positive definite matrix; a point of the manifold. Keeps its
/// eigensystem, so square roots and logarithms cost no further decomposition.
class HpdMatrix {
 public:
  /// Rejects matrices whose smallest eigenvalue is <= kPdTolerance times the
  /// largest one (DomainError).
  explicit HpdMatrix(const HermitianMatrix& m);
  explicit HpdMatrix(const CMatrix& m) : HpdMatrix(HermitianMatrix(m)) {}

  static HpdMatrix identity(std::size_t dim);
  static HpdMatrix scalar(std::size_t dim, double value);
  /// Keeps an eigensystem computed to relative accuracy elsewhere instead of
  /// recomputing it from the rounded entries. Eigenvalues ascending.
  static HpdMatrix from_eigensystem(Eigensystem es);

  std::size_t dim() const { return base_.dim(); }
  const HermitianMatrix& hermitian() const { return base_; }
  const CMatrix& matrix() const { return base_.matrix(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return base_(i, j); }
  const Eigensystem& eigen() const { return eigen_; }
  double condition_number() const;

  HermitianMatrix sqrt() const;
  HermitianMatrix inv_sqrt() const;
  HermitianMatrix log() const;

  static constexpr double kPdTolerance = 1e-100;

 private:
  HpdMatrix(HermitianMatrix base, Eigensystem es);
  void check_definite() const;

  HermitianMatrix base_;
  Eigensystem eigen_;
};

/// Congruence a * m := a^* m a. Rejects a with condition number above 1e12.
HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& m);
HpdMatrix congruence(const CMatrix& a, const HpdMatrix& m);

}  // namespace hpd
