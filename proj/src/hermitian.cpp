#include "hpd/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hpd {

// ---------------------------------------------------------------------------
// CMatrix

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
  CMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::from_parts(std::size_t dim, std::span<const double> re,
                            std::span<const double> im) {
  if (re.size() != dim * dim || (!im.empty() && im.size() != dim * dim))
    throw DomainError("matrix parts do not match dimension " + std::to_string(dim));
  CMatrix m(dim);
  for (std::size_t k = 0; k < dim * dim; ++k)
    m.a_[k] = Complex(re[k], im.empty() ? 0.0 : im[k]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

double CMatrix::frobenius_norm() const {
  // scaled accumulation so that matrices near the overflow boundary still work
  double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& z : a_) s += std::norm(z / scale);
  return scale * std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : a_) m = std::max({m, std::abs(z.real()), std::abs(z.imag())});
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (o.dim_ != dim_) throw DomainError("matrix dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (o.dim_ != dim_) throw DomainError("matrix dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(double s) {
  for (auto& z : a_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  const std::size_t d = a.dim();
  if (b.dim() != d) throw DomainError("matrix dimension mismatch");
  CMatrix r(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < d; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

namespace {

CMatrix hermitian_part(const CMatrix& m) {
  const std::size_t d = m.dim();
  CMatrix r(d);
  for (std::size_t i = 0; i < d; ++i) {
    r(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      r(i, j) = z;
      r(j, i) = std::conj(z);
    }
  }
  return r;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.dim() == 0) throw DomainError("Hermitian matrix must have dimension >= 1");
  if (!m.all_finite()) throw DomainError("matrix has non-finite entries");
  const double tol = 1e-12 * std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol)
        throw DomainError("matrix is not Hermitian at entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
  m_ = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::symmetrized(const CMatrix& m) {
  return HermitianMatrix(hermitian_part(m), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(std::size_t dim) {
  return HermitianMatrix(CMatrix(dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  return HermitianMatrix(CMatrix::identity(dim), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  return HermitianMatrix(CMatrix::diagonal(diag), Unchecked{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double frobenius_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("matrix dimension mismatch");
  // Tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij)
  double s = 0.0;
  const auto x = a.matrix().data();
  const auto y = b.matrix().data();
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] * std::conj(y[k])).real();
  return s;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {

// Diagonalizes a in place; on return the real diagonal holds the eigenvalues.
// Eigenvectors are accumulated into v when non-null.
void jacobi(CMatrix& a, CMatrix* v) {
  const std::size_t d = a.dim();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const std::size_t max_sweeps = 30 * d;
  if (d == 1) return;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (r <= kEps * std::sqrt(std::abs(app)) * std::sqrt(std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const Complex ph = apq / r;  // unit phase, apq = r * ph
        const Complex cph = std::conj(ph);
        const double theta = (aqq - app) / (2.0 * r);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = [[c, s], [-s*conj(ph), c*conj(ph)]] on the (p, q) plane; a <- U* a U
        for (std::size_t k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          const Complex nkp = c * akp - s * cph * akq;
          const Complex nkq = s * akp + c * cph * akq;
          a(k, p) = nkp;
          a(p, k) = std::conj(nkp);
          a(k, q) = nkq;
          a(q, k) = std::conj(nkq);
        }
        a(p, p) = app - t * r;
        a(q, q) = aqq + t * r;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (v != nullptr) {
          CMatrix& u = *v;
          for (std::size_t k = 0; k < d; ++k) {
            const Complex vkp = u(k, p);
            const Complex vkq = u(k, q);
            u(k, p) = c * vkp - s * cph * vkq;
            u(k, q) = s * vkp + c * cph * vkq;
          }
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalFailure("Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) +
                         " sweeps");
}

}  // namespace

Eigensystem eigh(const HermitianMatrix& m) {
  const std::size_t d = m.dim();
  CMatrix a = m.matrix();
  CMatrix v = CMatrix::identity(d);
  jacobi(a, &v);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  Eigensystem es;
  es.eigenvalues.resize(d);
  es.eigenvectors = CMatrix(d);
  for (std::size_t k = 0; k < d; ++k) {
    es.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < d; ++i) es.eigenvectors(i, k) = v(i, order[k]);
  }
  return es;
}

RealVector eigvalsh(const HermitianMatrix& m) {
  CMatrix a = m.matrix();
  jacobi(a, nullptr);
  RealVector ev(m.dim());
  for (std::size_t k = 0; k < m.dim(); ++k) ev[k] = a(k, k).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

HermitianMatrix matrix_function(const Eigensystem& es, const std::function<double(double)>& f) {
  const std::size_t d = es.eigenvalues.size();
  RealVector fl(d);
  for (std::size_t k = 0; k < d; ++k) {
    fl[k] = f(es.eigenvalues[k]);
    if (!std::isfinite(fl[k]))
      throw DomainError("matrix function undefined at eigenvalue " +
                        std::to_string(es.eigenvalues[k]));
  }
  const CMatrix& u = es.eigenvectors;
  CMatrix r(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += u(i, k) * fl[k] * std::conj(u(j, k));
      r(i, j) = s;
      r(j, i) = std::conj(s);
    }
  return HermitianMatrix::symmetrized(r);
}

HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f) {
  return matrix_function(eigh(m), f);
}

HermitianMatrix expm(const HermitianMatrix& h) {
  const Eigensystem es = eigh(h);
  if (es.eigenvalues.back() > kMaxExpArgument)
    throw NumericalFailure("matrix exponential overflows: eigenvalue " +
                           std::to_string(es.eigenvalues.back()) + " exceeds " +
                           std::to_string(kMaxExpArgument));
  return matrix_function(es, [](double x) { return std::exp(x); });
}

// ---------------------------------------------------------------------------
// Basis coordinates

std::vector<HermitianMatrix> hermitian_basis(std::size_t d) {
  if (d == 0) throw DomainError("basis dimension must be >= 1");
  std::vector<HermitianMatrix> basis;
  basis.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    CMatrix e(d);
    e(i, i) = 1.0;
    basis.push_back(HermitianMatrix::symmetrized(e));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      CMatrix re(d);
      re(i, j) = r;
      re(j, i) = r;
      basis.push_back(HermitianMatrix::symmetrized(re));
      CMatrix im(d);
      im(i, j) = Complex(0.0, r);
      im(j, i) = Complex(0.0, -r);
      basis.push_back(HermitianMatrix::symmetrized(im));
    }
  return basis;
}

BasisCoordinates::BasisCoordinates(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (coords_.size() != dim_ * dim_)
    throw DomainError("coordinate vector length " + std::to_string(coords_.size()) +
                      " does not match d^2 = " + std::to_string(dim_ * dim_));
}

void to_coordinates(const HermitianMatrix& m, std::span<double> out) {
  const std::size_t d = m.dim();
  if (out.size() != d * d) throw DomainError("coordinate buffer has wrong length");
  const double s2 = std::sqrt(2.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) out[k++] = m(i, i).real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      out[k++] = s2 * m(i, j).real();
      out[k++] = s2 * m(i, j).imag();
    }
}

BasisCoordinates to_coordinates(const HermitianMatrix& m) {
  std::vector<double> c(m.dim() * m.dim());
  to_coordinates(m, c);
  return BasisCoordinates(m.dim(), std::move(c));
}

HermitianMatrix from_coordinates(const BasisCoordinates& c) {
  const std::size_t d = c.dim();
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix m(d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) m(i, i) = c[k++];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double re = c[k++] * r;
      const double im = c[k++] * r;
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  return HermitianMatrix::symmetrized(m);
}

// ---------------------------------------------------------------------------
// HpdMatrix

HpdMatrix::HpdMatrix(const HermitianMatrix& m) : base_(m), eigen_(eigh(m)) { check_definite(); }

HpdMatrix::HpdMatrix(HermitianMatrix base, Eigensystem es) : base_(std::move(base)), eigen_(std::move(es)) {
  check_definite();
}

HpdMatrix HpdMatrix::from_eigensystem(Eigensystem es) {
  HermitianMatrix base = matrix_function(es, [](double x) { return x; });
  return HpdMatrix(std::move(base), std::move(es));
}

void HpdMatrix::check_definite() const {
  const double lo = eigen_.eigenvalues.front();
  const double hi = eigen_.eigenvalues.back();
  if (!std::isfinite(hi) || hi <= 0.0 || lo <= kPdTolerance * hi)
    throw DomainError("matrix is not positive definite (eigenvalue range [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "])");
}

HpdMatrix HpdMatrix::identity(std::size_t dim) {
  return HpdMatrix(HermitianMatrix::identity(dim));
}

HpdMatrix HpdMatrix::scalar(std::size_t dim, double value) {
  return HpdMatrix(HermitianMatrix::identity(dim) * value);
}

double HpdMatrix::condition_number() const {
  return eigen_.eigenvalues.back() / eigen_.eigenvalues.front();
}

HermitianMatrix HpdMatrix::sqrt() const {
  return matrix_function(eigen_, [](double x) { return std::sqrt(x); });
}

HermitianMatrix HpdMatrix::inv_sqrt() const {
  return matrix_function(eigen_, [](double x) { return 1.0 / std::sqrt(x); });
}

HermitianMatrix HpdMatrix::log() const {
  return matrix_function(eigen_, [](double x) { return std::log(x); });
}

// ---------------------------------------------------------------------------
// Congruence

HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& m) {
  if (a.dim() != m.dim()) throw DomainError("congruence: dimension mismatch");
  if (!a.all_finite()) throw DomainError("congruence: non-finite transform");
  const CMatrix ah = a.adjoint();
  const RealVector sv2 = eigvalsh(HermitianMatrix::symmetrized(ah * a));
  if (!(sv2.front() > 1e-24 * sv2.back()))
    throw DomainError("congruence: transform is singular or condition number exceeds 1e12");
  return HermitianMatrix::symmetrized(ah * m.matrix() * a);
}

HpdMatrix congruence(const CMatrix& a, const HpdMatrix& m) {
  return HpdMatrix(congruence(a, m.hermitian()));
}

}  // namespace hpd
