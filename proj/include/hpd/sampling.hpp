#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "hpd/sample.hpp"

namespace hpd {

struct RngSeed {
  std::uint64_t seed = 0;
};

/// Generator for stream `stream` of a seed. Streams are decorrelated by
/// splitmix64 mixing, so replicate b of an experiment can be regenerated alone.
std::mt19937_64 make_stream(RngSeed seed, std::uint64_t stream);

/// Recorded in report provenance.
inline constexpr std::string_view kRngDescription =
    "mt19937_64, splitmix64 stream seeding; libstdc++ normal_distribution and gamma_distribution";

/// X_i = mu^{1/2} Exp(sum_k Z_k e^k) mu^{1/2}, Z_k iid N(0, sigma^2). Observation i
/// draws from stream i.
HpdSample sample_lognormal(const HpdMatrix& mu, double sigma, std::size_t n, RngSeed seed);

/// As sample_lognormal with coordinates drawn from the p-generalized normal
/// law with density proportional to exp(-|z|^p / p) (standard deviation sigma_p).
HpdSample sample_pgnd(const HpdMatrix& mu, double p, std::size_t n, RngSeed seed);
double sigma_p(double p);

/// e^{-c(d,B)} W with W a complex Wishart matrix of B degrees of freedom and
/// scale mu/B (so E[W] = mu). Requires B >= d.
HpdSample sample_wishart_rescaled(const HpdMatrix& mu, std::size_t B, std::size_t n, RngSeed seed);
/// c(d, B) = -log B + (1/d) sum_{i=1..d} digamma(B - (d - i)).
double intrinsic_bias_correction(std::size_t d, double B);

/// Uniformly random direction on the unit Frobenius sphere of d x d Hermitian matrices.
HermitianMatrix random_unit_hermitian(std::size_t d, std::mt19937_64& rng);
/// Complex Ginibre matrix with standard normal real and imaginary parts;
/// redrawn until its condition number is below 1e4.
CMatrix random_invertible(std::size_t d, std::mt19937_64& rng);
/// Exp of a random Hermitian matrix with coordinates N(0, scale^2).
HpdMatrix random_hpd(std::size_t d, std::mt19937_64& rng, double scale = 1.0);

}  // namespace hpd
