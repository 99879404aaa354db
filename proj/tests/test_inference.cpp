#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hpd/inference.hpp"
#include "hpd/manifold.hpp"
#include "support.hpp"

using namespace hpd;

namespace {

const SolverConfig kCfg{};

HpdSample gnd_sample(std::size_t n, std::uint64_t seed) {
  return sample_pgnd(HpdMatrix::identity(2), 2.0, n, RngSeed{seed});
}

bool is_member(const BootstrapCR& cr, std::size_t i) {
  return std::find(cr.members.begin(), cr.members.end(), i) != cr.members.end();
}

}  // namespace

TEST_CASE("bootstrap indices come from per-replicate streams") {
  const auto a = bootstrap_indices(30, RngSeed{4}, 7);
  CHECK(a == bootstrap_indices(30, RngSeed{4}, 7));
  CHECK(a != bootstrap_indices(30, RngSeed{4}, 8));
  CHECK(std::all_of(a.begin(), a.end(), [](std::size_t i) { return i < 30; }));
}

TEST_CASE("preconditions") {
  const auto s = gnd_sample(20, 1);
  CHECK_THROWS_AS(bootstrap_cr(s, 49, 0.05, DepthMethod::gdd, kCfg, RngSeed{1}), DomainError);
  CHECK_THROWS_AS(bootstrap_cr(s, 50, 0.05, DepthMethod::spatial, kCfg, RngSeed{1}), DomainError);
  CHECK_THROWS_AS(bootstrap_cr(s, 50, 0.0, DepthMethod::gdd, kCfg, RngSeed{1}), DomainError);
  CHECK_THROWS_AS(bootstrap_cr(gnd_sample(4, 2), 50, 0.05, DepthMethod::zonoid, kCfg, RngSeed{1}), DomainError);

  BootstrapCR tiny;
  tiny.method = DepthMethod::zonoid;
  tiny.boot_means = {HpdMatrix::identity(2), HpdMatrix::scalar(2, 2.0), HpdMatrix::scalar(2, 3.0)};
  CHECK_THROWS_AS(cr_contains(tiny, HpdMatrix::identity(2)), DomainError);
  CHECK_THROWS_AS(cr_contains(tiny, HpdMatrix::identity(3)), DomainError);
}

TEST_CASE("sample of identical points") {
  std::mt19937_64 rng(3);
  const HpdMatrix x = random_hpd(2, rng);
  const HpdSample s(std::vector<HpdMatrix>(12, x));
  const auto cr = bootstrap_cr(s, 60, 0.05, DepthMethod::gdd, kCfg, RngSeed{9});
  REQUIRE(cr.boot_means.size() == 60);
  for (const auto& m : cr.boot_means) CHECK(dist(m, x) < 1e-12);
  CHECK(cr.beta_star == doctest::Approx(1.0));
  CHECK(cr.members.size() == 60);
  CHECK(cr_contains(cr, x));
  CHECK(cr.size < 1e-12);
}

TEST_CASE("quantile minimality, membership and size") {
  const auto s = gnd_sample(40, 5);
  for (auto method : {DepthMethod::gdd, DepthMethod::zonoid}) {
    CAPTURE(to_string(method));
    const auto cr = bootstrap_cr(s, 80, 0.1, method, kCfg, RngSeed{17});
    const std::size_t B = cr.boot_means.size();
    REQUIRE(B == 80);
    CHECK(cr.failures == 0);

    auto covered = [&](double score) {
      std::size_t c = 0;
      for (double v : cr.depth_scores) c += (v >= score || scores_tied(v, score)) ? 1 : 0;
      return c;
    };
    CHECK(covered(cr.beta_score) >= std::ceil(0.9 * B));
    CHECK(covered(cr.beta_score) == cr.members.size());
    for (double v : cr.depth_scores)
      if (v > cr.beta_score && !scores_tied(v, cr.beta_score)) CHECK(covered(v) < std::ceil(0.9 * B));

    const auto deepest = std::max_element(cr.depth_scores.begin(), cr.depth_scores.end()) - cr.depth_scores.begin();
    CHECK(cr_contains(cr, cr.boot_means[deepest]));
    const HpdMatrix far = HpdMatrix(HermitianMatrix::diagonal(std::vector<double>{std::exp(60.0), 1.0}));
    CHECK_FALSE(cr_contains(cr, far));

    double size = 0.0;
    for (auto i : cr.members) size = std::max(size, dist(cr.center, cr.boot_means[i]));
    CHECK(cr.size == size);
    CHECK(dist(cr.center, intrinsic_mean(s)) < 1e-12);
  }
}

TEST_CASE("reproducibility and nesting on shared draws") {
  const auto s = gnd_sample(30, 7);
  const auto boot = bootstrap_means(s, 60, kCfg, RngSeed{21});
  const auto again = bootstrap_means(s, 60, kCfg, RngSeed{21});
  for (std::size_t i = 0; i < boot.means.size(); ++i) CHECK(testing::max_diff(boot.means[i], again.means[i]) == 0.0);

  const HpdMatrix center = intrinsic_mean(s);
  for (auto method : {DepthMethod::gdd, DepthMethod::zonoid}) {
    const auto wide = confidence_region(boot, center, 0.05, method);
    const auto narrow = confidence_region(boot, center, 0.2, method);
    CHECK(narrow.beta_score >= wide.beta_score);
    for (auto i : narrow.members) CHECK(is_member(wide, i));
    CHECK(narrow.size <= wide.size);

    const auto cr1 = bootstrap_cr(s, 60, 0.05, method, kCfg, RngSeed{21});
    const auto cr2 = bootstrap_cr(s, 60, 0.05, method, kCfg, RngSeed{21});
    CHECK(cr1.beta_star == cr2.beta_star);
    CHECK(cr1.members == cr2.members);
    CHECK(cr1.beta_star == wide.beta_star);
  }
}

TEST_CASE("congruence equivariance") {
  const auto s = gnd_sample(30, 11);
  std::mt19937_64 rng(12);
  for (auto method : {DepthMethod::gdd, DepthMethod::zonoid}) {
    CAPTURE(to_string(method));
    const auto id = cr_equivariance_check(s, CMatrix::identity(2), 50, 0.05, method, kCfg, RngSeed{3});
    CHECK(id.tested == 20);
    CHECK(id.passed());
    CHECK(id.max_beta_gap == 0.0);

    const auto two = cr_equivariance_check(s, CMatrix::identity(2) * 2.0, 50, 0.05, method, kCfg, RngSeed{3});
    CHECK(two.passed());

    const CMatrix a = random_invertible(2, rng);
    const auto rep = cr_equivariance_check(s, a, 50, 0.05, method, kCfg, RngSeed{3});
    CHECK(rep.agreed == 20);
    CHECK(rep.max_beta_gap < 1e-6);
  }
}
