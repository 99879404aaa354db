#include "hpd/sampling.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "hpd/manifold.hpp"
#include "hpd/parallel.hpp"

namespace hpd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CMatrix product(const CMatrix& a, const CMatrix& b) { return a * b; }

/// mu^{1/2} Exp(v) mu^{1/2}.
HpdMatrix push_forward(const CMatrix& root, const HermitianMatrix& v) {
  const CMatrix e = expm(v).matrix();
  return HpdMatrix(HermitianMatrix::symmetrized(product(product(root, e), root)));
}

template <class Draw>
HpdSample tangent_sample(const HpdMatrix& mu, std::size_t n, RngSeed seed, Draw draw) {
  if (n == 0) throw DomainError("sample size must be positive");
  const std::size_t d = mu.dim();
  const CMatrix root = mu.sqrt().matrix();
  std::vector<HpdMatrix> obs(n, mu);
  parallel_for(n, [&](std::size_t i) {
    std::mt19937_64 rng = make_stream(seed, i);
    std::vector<double> z(d * d);
    for (auto& c : z) c = draw(rng);
    obs[i] = push_forward(root, from_coordinates(BasisCoordinates(d, std::move(z))));
  });
  return HpdSample(std::move(obs));
}

}  // namespace

std::mt19937_64 make_stream(RngSeed seed, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed.seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

HpdSample sample_lognormal(const HpdMatrix& mu, double sigma, std::size_t n, RngSeed seed) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  return tangent_sample(mu, n, seed, [sigma](std::mt19937_64& rng) {
    return std::normal_distribution<double>(0.0, sigma)(rng);
  });
}

double sigma_p(double p) {
  if (!(p >= 1.0)) throw DomainError("p must be at least 1");
  return std::pow(p, 1.0 / p) * std::sqrt(std::tgamma(3.0 / p) / std::tgamma(1.0 / p));
}

HpdSample sample_pgnd(const HpdMatrix& mu, double p, std::size_t n, RngSeed seed) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must be at least 1");
  return tangent_sample(mu, n, seed, [p](std::mt19937_64& rng) {
    const double g = std::gamma_distribution<double>(1.0 / p, 1.0)(rng);
    const double mag = std::pow(p * g, 1.0 / p);
    return (rng() & 1ULL) ? mag : -mag;
  });
}

double intrinsic_bias_correction(std::size_t d, double B) {
  if (d == 0) throw DomainError("dimension must be positive");
  if (!(B > static_cast<double>(d) - 1.0)) throw DomainError("Wishart degrees of freedom must exceed d - 1");
  double s = 0.0;
  for (std::size_t i = 1; i <= d; ++i) s += boost::math::digamma(B - static_cast<double>(d - i));
  return -std::log(B) + s / static_cast<double>(d);
}

HpdSample sample_wishart_rescaled(const HpdMatrix& mu, std::size_t B, std::size_t n, RngSeed seed) {
  const std::size_t d = mu.dim();
  if (B < d)
    throw DomainError("Wishart degrees of freedom B = " + std::to_string(B) + " must exceed d - 1 = " +
                      std::to_string(d - 1));
  if (n == 0) throw DomainError("sample size must be positive");
  const double scale = std::exp(-intrinsic_bias_correction(d, static_cast<double>(B)));
  const CMatrix root = mu.sqrt().matrix();
  const double inv_sqrt_b = 1.0 / std::sqrt(static_cast<double>(B));
  std::vector<HpdMatrix> obs(n, mu);
  parallel_for(n, [&](std::size_t i) {
    std::mt19937_64 rng = make_stream(seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix w(d);
    std::vector<Complex> z(d), v(d);
    for (std::size_t b = 0; b < B; ++b) {
      for (auto& c : z) {
        const double re = normal(rng);
        const double im = normal(rng);
        c = Complex(re, im) * std::sqrt(0.5);
      }
      for (std::size_t r = 0; r < d; ++r) {
        Complex s(0.0, 0.0);
        for (std::size_t c = 0; c < d; ++c) s += root(r, c) * z[c];
        v[r] = s * inv_sqrt_b;
      }
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) w(r, c) += v[r] * std::conj(v[c]);
    }
    w *= scale;
    obs[i] = HpdMatrix(HermitianMatrix::symmetrized(w));
  });
  return HpdSample(std::move(obs));
}

HermitianMatrix random_unit_hermitian(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(d * d);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : c) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm < 1e-20);
  norm = std::sqrt(norm);
  for (auto& x : c) x /= norm;
  return from_coordinates(BasisCoordinates(d, std::move(c)));
}

CMatrix random_invertible(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    CMatrix a(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        a(i, j) = Complex(re, im);
      }
    const RealVector ev = eigvalsh(HermitianMatrix::symmetrized(a.adjoint() * a));
    if (ev.front() > 0.0 && ev.back() / ev.front() < 1e8) return a;  // cond(a) < 1e4
  }
}

HpdMatrix random_hpd(std::size_t d, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> c(d * d);
  for (auto& x : c) x = normal(rng);
  return HpdMatrix(expm(from_coordinates(BasisCoordinates(d, std::move(c)))));
}

}  // namespace hpd
