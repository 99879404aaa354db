#include "hpd/manifold.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace hpd {

namespace {

// Arguments above this condition number (and above the frame's) take the
// one-sided path.
constexpr double kGradedCondition = 1e4;

// Orthogonalizes the columns of g by plane rotations from the right. Column
// phases may change; left singular directions and values are preserved.
void hestenes(CMatrix& g) {
  const std::size_t d = g.dim();
  const double eps = 4.0 * DBL_EPSILON;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        double a = 0.0, b = 0.0;
        Complex c(0.0, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
          a += std::norm(g(k, p));
          b += std::norm(g(k, q));
          c += std::conj(g(k, p)) * g(k, q);
        }
        const double ac = std::abs(c);
        if (ac <= eps * std::sqrt(a) * std::sqrt(b) || ac == 0.0) continue;
        rotated = true;
        const Complex phase = std::conj(c) / ac;
        for (std::size_t k = 0; k < d; ++k) g(k, q) *= phase;
        const double zeta = (b - a) / (2.0 * ac);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t k = 0; k < d; ++k) {
          const Complex gp = g(k, p);
          g(k, p) = cs * gp - sn * g(k, q);
          g(k, q) = sn * gp + cs * g(k, q);
        }
      }
    if (!rotated) return;
  }
  throw NumericalFailure("one-sided Jacobi did not converge");
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

NormalFrame::NormalFrame(const HpdMatrix& p) : u_(p.eigen().eigenvectors), cond_(p.condition_number()) {
  const auto& lambda = p.eigen().eigenvalues;
  sqrt_lambda_.resize(lambda.size());
  inv_sqrt_lambda_.resize(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    sqrt_lambda_[k] = std::sqrt(lambda[k]);
    inv_sqrt_lambda_[k] = 1.0 / sqrt_lambda_[k];
  }
}

HermitianMatrix NormalFrame::whiten(const HermitianMatrix& h) const {
  require_same_dim(h.dim(), dim());
  const std::size_t d = dim();
  // (U* h U)_ij / (sqrt(l_i) sqrt(l_j))
  CMatrix hu(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += h(i, k) * u_(k, j);
      hu(i, j) = s;
    }
  CMatrix r(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += std::conj(u_(k, i)) * hu(k, j);
      s *= inv_sqrt_lambda_[i] * inv_sqrt_lambda_[j];
      r(i, j) = s;
      r(j, i) = std::conj(s);
    }
  return HermitianMatrix::symmetrized(r);
}

HermitianMatrix NormalFrame::unwhiten(const HermitianMatrix& v) const {
  require_same_dim(v.dim(), dim());
  const std::size_t d = dim();
  // U diag(s) v diag(s) U*
  CMatrix sv(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) sv(i, j) = v(i, j) * (sqrt_lambda_[i] * sqrt_lambda_[j]);
  CMatrix t(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += u_(i, k) * sv(k, j);
      t(i, j) = s;
    }
  CMatrix r(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += t(i, k) * std::conj(u_(j, k));
      r(i, j) = s;
      r(j, i) = std::conj(s);
    }
  return HermitianMatrix::symmetrized(r);
}

bool NormalFrame::graded_path(const HpdMatrix& x) const {
  const double c = x.condition_number();
  return c > kGradedCondition && c >= cond_;
}

CMatrix NormalFrame::graded_factor(const HpdMatrix& x) const {
  require_same_dim(x.dim(), dim());
  const std::size_t d = dim();
  const auto& ux = x.eigen().eigenvectors;
  const auto& lx = x.eigen().eigenvalues;
  CMatrix g(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += std::conj(u_(k, i)) * ux(k, j);
      g(i, j) = s * (inv_sqrt_lambda_[i] * std::sqrt(lx[j]));
    }
  hestenes(g);
  return g;
}

HermitianMatrix NormalFrame::log(const HpdMatrix& x) const {
  if (graded_path(x)) {
    const CMatrix g = graded_factor(x);
    const std::size_t d = dim();
    CMatrix r(d);
    for (std::size_t j = 0; j < d; ++j) {
      double s2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) s2 += std::norm(g(k, j));
      if (!(s2 > 0.0)) throw NumericalFailure("whitened matrix lost positive definiteness");
      // 2 log sigma_j * P_j P_j^* with P_j = g_j / sigma_j
      const double w = std::log(s2) / s2;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) r(a, b) += w * g(a, j) * std::conj(g(b, j));
    }
    return HermitianMatrix::symmetrized(r);
  }
  const Eigensystem es = eigh(whiten(x.hermitian()));
  if (!(es.eigenvalues.front() > 0.0))
    throw NumericalFailure("whitened matrix lost positive definiteness");
  return matrix_function(es, [](double v) { return std::log(v); });
}

double NormalFrame::distance(const HpdMatrix& x) const {
  if (graded_path(x)) {
    const CMatrix g = graded_factor(x);
    double s = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) {
      double s2 = 0.0;
      for (std::size_t k = 0; k < dim(); ++k) s2 += std::norm(g(k, j));
      if (!(s2 > 0.0)) throw NumericalFailure("whitened matrix lost positive definiteness");
      const double l = std::log(s2);
      s += l * l;
    }
    return std::sqrt(s);
  }
  const RealVector ev = eigvalsh(whiten(x.hermitian()));
  double s = 0.0;
  for (double v : ev) {
    if (!(v > 0.0)) throw NumericalFailure("whitened matrix lost positive definiteness");
    const double l = std::log(v);
    s += l * l;
  }
  return std::sqrt(s);
}

HpdMatrix NormalFrame::exp(const HermitianMatrix& v) const {
  require_same_dim(v.dim(), dim());
  const Eigensystem ev = eigh(v);
  if (ev.eigenvalues.back() > kMaxExpArgument)
    throw NumericalFailure("exponential map overflows: eigenvalue " + std::to_string(ev.eigenvalues.back()) +
                           " exceeds " + std::to_string(kMaxExpArgument));
  // F Exp(v) F* = G G* with G = F V diag(e^{m/2}). One-sided Jacobi on G keeps
  // the small eigenvalues that forming G G* would round away.
  const std::size_t d = dim();
  CMatrix g(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k) s += u_(i, k) * sqrt_lambda_[k] * ev.eigenvectors(k, j);
      g(i, j) = s * std::exp(0.5 * ev.eigenvalues[j]);
    }
  hestenes(g);

  std::vector<double> s2(d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) s2[j] += std::norm(g(k, j));
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s2[a] < s2[b]; });
  Eigensystem es;
  es.eigenvalues.resize(d);
  es.eigenvectors = CMatrix(d);
  for (std::size_t c = 0; c < d; ++c) {
    const std::size_t j = order[c];
    if (!(s2[j] > 0.0) || !std::isfinite(s2[j])) throw NumericalFailure("exponential map lost positive definiteness");
    es.eigenvalues[c] = s2[j];
    const double inv = 1.0 / std::sqrt(s2[j]);
    for (std::size_t k = 0; k < d; ++k) es.eigenvectors(k, c) = g(k, j) * inv;
  }
  return HpdMatrix::from_eigensystem(std::move(es));
}

double inner(const HpdMatrix& p, const HermitianMatrix& h1, const HermitianMatrix& h2) {
  const NormalFrame f(p);
  return frobenius_inner(f.whiten(h1), f.whiten(h2));
}

double riemannian_norm(const HpdMatrix& p, const HermitianMatrix& h) {
  return NormalFrame(p).whiten(h).frobenius_norm();
}

double dist(const HpdMatrix& p1, const HpdMatrix& p2) {
  require_same_dim(p1.dim(), p2.dim());
  if (p2.condition_number() > p1.condition_number()) return NormalFrame(p2).distance(p1);
  return NormalFrame(p1).distance(p2);
}

HpdMatrix exp_map(const HpdMatrix& p, const HermitianMatrix& h) {
  require_same_dim(p.dim(), h.dim());
  const NormalFrame f(p);
  return f.exp(f.whiten(h));
}

HermitianMatrix log_map(const HpdMatrix& p, const HpdMatrix& q) {
  require_same_dim(p.dim(), q.dim());
  const NormalFrame f(p);
  return f.unwhiten(f.log(q));
}

HpdMatrix geodesic(const HpdMatrix& p, const HpdMatrix& q, double t) {
  require_same_dim(p.dim(), q.dim());
  const NormalFrame f(p);
  return f.exp(f.log(q) * t);
}

}  // namespace hpd
