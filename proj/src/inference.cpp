#include "hpd/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hpd/manifold.hpp"
#include "hpd/parallel.hpp"

namespace hpd {

namespace {

void check_method(DepthMethod method) {
  if (method != DepthMethod::zonoid && method != DepthMethod::gdd)
    throw DomainError("bootstrap regions support the zonoid and gdd methods only");
}

}  // namespace

std::vector<std::size_t> bootstrap_indices(std::size_t n, RngSeed seed, std::size_t b) {
  std::mt19937_64 rng = make_stream(seed, b);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

BootstrapMeans bootstrap_means(const HpdSample& sample, std::size_t B, const SolverConfig& cfg, RngSeed seed) {
  if (B < kMinBootstrapReplicates)
    throw DomainError("bootstrap needs B >= " + std::to_string(kMinBootstrapReplicates) + " (got " +
                      std::to_string(B) + ")");
  cfg.validate();
  const std::size_t n = sample.size();
  // Resamples inherit cached distances for their medoid start.
  if (n <= 2048) sample.build_distance_cache();

  std::vector<std::optional<HpdMatrix>> out(B);
  parallel_for(B, [&](std::size_t b) {
    const auto idx = bootstrap_indices(n, seed, b);
    try {
      out[b] = solve_intrinsic_mean(sample.resample(idx), {}, cfg).point;
    } catch (const NumericalFailure&) {
      out[b].reset();
    }
  });

  BootstrapMeans r;
  r.requested = B;
  r.seed = seed;
  for (std::size_t b = 0; b < B; ++b) {
    if (out[b]) {
      r.means.push_back(std::move(*out[b]));
      r.replicate.push_back(b);
    } else {
      ++r.failures;
    }
  }
  if (static_cast<double>(r.failures) > 0.01 * static_cast<double>(B))
    throw NumericalFailure("bootstrap aborted: " + std::to_string(r.failures) + " of " + std::to_string(B) +
                           " resample means failed to converge");
  return r;
}

BootstrapCR confidence_region(const BootstrapMeans& boot, const HpdMatrix& center, double alpha,
                              DepthMethod method) {
  check_method(method);
  const auto depths = sample_depths(method, HpdSample(boot.means));
  return confidence_region(boot, center, alpha, method, depths);
}

BootstrapCR confidence_region(const BootstrapMeans& boot, const HpdMatrix& center, double alpha,
                              DepthMethod method, std::span<const ScoredDepth> depths) {
  check_method(method);
  if (depths.size() != boot.means.size()) throw DomainError("depths do not match the bootstrap means");
  const DepthRegion region = depth_region(depths, alpha);
  BootstrapCR cr;
  cr.boot_means = boot.means;
  for (const auto& d : depths) {
    cr.depth_values.push_back(d.value);
    cr.depth_scores.push_back(d.score);
  }
  cr.beta_star = region.beta_star;
  cr.beta_score = region.beta_score;
  cr.alpha = alpha;
  cr.method = method;
  cr.seed = boot.seed;
  cr.center = center;
  cr.members = region.members;
  cr.failures = boot.failures;
  cr.size = cr_size(cr);
  return cr;
}

BootstrapCR bootstrap_cr(const HpdSample& sample, std::size_t B, double alpha, DepthMethod method,
                         const SolverConfig& cfg, RngSeed seed) {
  check_method(method);
  const std::size_t d2 = sample.dim() * sample.dim();
  if (method == DepthMethod::zonoid && sample.size() <= d2)
    throw DomainError("zonoid requires n > d^2 (n = " + std::to_string(sample.size()) +
                      ", d^2 = " + std::to_string(d2) + ")");
  if (method == DepthMethod::zonoid && B <= d2)
    throw DomainError("zonoid requires B > d^2 (B = " + std::to_string(B) + ", d^2 = " + std::to_string(d2) + ")");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const BootstrapMeans boot = bootstrap_means(sample, B, cfg, seed);
  const HpdMatrix center = intrinsic_mean(sample, {}, cfg);
  return confidence_region(boot, center, alpha, method);
}

bool cr_contains(const BootstrapCR& cr, const HpdMatrix& theta) {
  const std::size_t d = theta.dim();
  if (cr.boot_means.empty() || cr.boot_means.front().dim() != d)
    throw DomainError("test point dimension does not match the confidence region");
  if (cr.method == DepthMethod::zonoid && cr.boot_means.size() <= d * d)
    throw DomainError("zonoid requires B > d^2");
  const ScoredDepth s = depth(cr.method, HpdSample(cr.boot_means), theta);
  return s.score >= cr.beta_score || scores_tied(s.score, cr.beta_score);
}

double cr_size(const BootstrapCR& cr) {
  double size = 0.0;
  for (auto i : cr.members) size = std::max(size, dist(cr.center, cr.boot_means[i]));
  return size;
}

EquivarianceReport cr_equivariance_check(const HpdSample& sample, const CMatrix& a, std::size_t B, double alpha,
                                         DepthMethod method, const SolverConfig& cfg, RngSeed seed,
                                         std::span<const HpdMatrix> thetas) {
  const BootstrapCR base = bootstrap_cr(sample, B, alpha, method, cfg, seed);
  const BootstrapCR moved = bootstrap_cr(sample.congruence(a), B, alpha, method, cfg, seed);

  std::vector<HpdMatrix> pts(thetas.begin(), thetas.end());
  if (pts.empty()) {
    const NormalFrame f(base.center);
    for (std::size_t j = 0; j < 20; ++j) {
      const HpdMatrix& m = base.boot_means[(j * base.boot_means.size()) / 20];
      const double t = 0.6 + 0.15 * static_cast<double>(j % 8);
      pts.push_back(f.exp(f.log(m) * t));
    }
  }
  EquivarianceReport r;
  r.max_beta_gap = std::abs(base.beta_score - moved.beta_score);
  for (const auto& theta : pts) {
    ++r.tested;
    if (cr_contains(base, theta) == cr_contains(moved, congruence(a, theta))) ++r.agreed;
  }
  return r;
}

}  // namespace hpd
