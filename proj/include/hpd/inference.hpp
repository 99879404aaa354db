#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hpd/centers.hpp"
#include "hpd/depth.hpp"
#include "hpd/sampling.hpp"

namespace hpd {

inline constexpr std::size_t kMinBootstrapReplicates = 50;

/// Resampling indices of bootstrap replicate b: n draws with replacement from
/// stream b of the seed.
std::vector<std::size_t> bootstrap_indices(std::size_t n, RngSeed seed, std::size_t b);

/// Intrinsic means of B bootstrap resamples. Replicates whose solver fails are
/// dropped and counted; more than 1% failures abort with NumericalFailure.
struct BootstrapMeans {
  std::vector<HpdMatrix> means;
  std::vector<std::size_t> replicate;  // replicate index of each mean
  std::size_t requested = 0;
  std::size_t failures = 0;
  RngSeed seed;
};

BootstrapMeans bootstrap_means(const HpdSample& sample, std::size_t B, const SolverConfig& cfg, RngSeed seed);

struct BootstrapCR {
  std::vector<HpdMatrix> boot_means;
  std::vector<double> depth_values;
  std::vector<double> depth_scores;
  double beta_star = 0.0;
  double beta_score = 0.0;
  double alpha = 0.0;
  DepthMethod method = DepthMethod::gdd;
  RngSeed seed;
  HpdMatrix center = HpdMatrix::identity(1);  // full-sample intrinsic mean
  double size = 0.0;                  // max distance from center to a member
  std::vector<std::size_t> members;   // indices into boot_means
  std::size_t failures = 0;
};

/// Percentile region from precomputed bootstrap means. Depths of the means
/// are taken against their own empirical distribution.
BootstrapCR confidence_region(const BootstrapMeans& boot, const HpdMatrix& center, double alpha,
                              DepthMethod method);
/// Same, reusing in-sample depths already computed for these means.
BootstrapCR confidence_region(const BootstrapMeans& boot, const HpdMatrix& center, double alpha,
                              DepthMethod method, std::span<const ScoredDepth> depths);

/// Requires B >= 50, method in {zonoid, gdd}, and n > d^2 and B > d^2 for zonoid.
BootstrapCR bootstrap_cr(const HpdSample& sample, std::size_t B, double alpha, DepthMethod method,
                         const SolverConfig& cfg, RngSeed seed);

/// Depth of theta against the bootstrap means, compared with beta_star.
bool cr_contains(const BootstrapCR& cr, const HpdMatrix& theta);
/// max dist(center, m) over member bootstrap means.
double cr_size(const BootstrapCR& cr);

struct EquivarianceReport {
  std::size_t tested = 0;
  std::size_t agreed = 0;
  double max_beta_gap = 0.0;  // |beta(a * sample) - beta(sample)| in score units
  bool passed() const { return tested == agreed; }
};

/// Builds the region for the sample and for a * sample from identical
/// resampling indices and compares membership of theta and a * theta. Without
/// explicit test points, 20 points on geodesics from the center through
/// bootstrap means are used.
EquivarianceReport cr_equivariance_check(const HpdSample& sample, const CMatrix& a, std::size_t B, double alpha,
                                         DepthMethod method, const SolverConfig& cfg, RngSeed seed,
                                         std::span<const HpdMatrix> thetas = {});

}  // namespace hpd
