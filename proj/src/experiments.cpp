#include "hpd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "hpd/inference.hpp"
#include "hpd/manifold.hpp"
#include "hpd/parallel.hpp"

namespace hpd {

RngSeed derive_seed(RngSeed parent, std::uint64_t k) {
  auto rng = make_stream(parent, k);
  return RngSeed{rng()};
}

namespace {

double log_norm(const HpdMatrix& x) { return x.log().frobenius_norm(); }

HermitianMatrix contamination_direction(std::size_t d, DirectionMode mode, RngSeed seed) {
  std::vector<double> diag(d, 0.0);
  if (mode == DirectionMode::canonical) {
    diag[0] = 1.0;
  } else {
    auto rng = make_stream(seed, 0x5eedULL);
    std::normal_distribution<double> normal;
    double norm = 0.0;
    while (norm < 1e-3) {
      norm = 0.0;
      for (auto& v : diag) {
        v = normal(rng);
        norm += v * v;
      }
      norm = std::sqrt(norm);
    }
    for (auto& v : diag) v /= norm;
  }
  return HermitianMatrix::diagonal(diag);
}

// Unbiased variance of a sample.
double variance(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

std::string_view to_string(ContaminationMode m) {
  return m == ContaminationMode::replicated ? "replicated" : "adversarial";
}

std::string_view to_string(DirectionMode m) { return m == DirectionMode::canonical ? "canonical" : "random"; }

ContaminationMode parse_contamination_mode(std::string_view s) {
  if (s == "replicated") return ContaminationMode::replicated;
  if (s == "adversarial") return ContaminationMode::adversarial;
  throw DomainError("unknown contamination mode '" + std::string(s) + "'");
}

DirectionMode parse_direction_mode(std::string_view s) {
  if (s == "canonical") return DirectionMode::canonical;
  if (s == "random") return DirectionMode::random;
  throw DomainError("unknown direction mode '" + std::string(s) + "'");
}

void BreakdownParams::validate() const {
  if (n < 1 || d < 1) throw DomainError("breakdown needs n >= 1 and d >= 1");
  if (mode == ContaminationMode::adversarial && m < 2)
    throw DomainError("adversarial contamination needs m >= 2");
  if (!(contamination_norm > 0.0)) throw DomainError("contamination norm must be positive");
  // Log-eigenvalue spread of Exp(s h): s for e1, up to s sqrt(2) for a unit diagonal h.
  const double limit = direction == DirectionMode::random ? kMaxContaminationNorm / std::sqrt(2.0) : kMaxContaminationNorm;
  if (contamination_norm > limit)
    throw NumericalFailure("contamination norm " + std::to_string(contamination_norm) +
                           " exceeds the representable maximum " + std::to_string(limit) +
                           " (the contaminant is numerically singular in double precision)");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (runs < 1) throw DomainError("breakdown needs runs >= 1");
  for (auto method : methods)
    if (method != DepthMethod::zonoid && method != DepthMethod::gdd && method != DepthMethod::spatial)
      throw DomainError("breakdown supports the zonoid, gdd and spatial methods");
}

BreakdownReport breakdown_rank_experiment(const BreakdownParams& params) {
  params.validate();
  BreakdownReport report{params, {}, {}};
  const std::size_t n = params.n;

  for (std::size_t run = 0; run < params.runs; ++run) {
    const RngSeed seed = params.runs == 1 ? params.seed : derive_seed(params.seed, run);
    const HpdSample clean = sample_lognormal(HpdMatrix::identity(params.d), params.sigma, n, seed);
    const HermitianMatrix h = contamination_direction(params.d, params.direction, seed);
    const HpdMatrix y1 = exp_map(HpdMatrix::identity(params.d), h * params.contamination_norm);

    std::vector<HpdMatrix> z(clean.observations().begin(), clean.observations().end());
    const std::size_t copies = params.mode == ContaminationMode::adversarial ? params.m - 1 : params.m;
    for (std::size_t k = 0; k < copies; ++k) z.push_back(y1);
    if (params.mode == ContaminationMode::adversarial) z.push_back(intrinsic_mean(HpdSample(z)));
    const HpdSample all(z);

    std::vector<double> norms(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) norms[i] = log_norm(z[i]);
    const double clean_max = n == 0 ? 0.0 : *std::max_element(norms.begin(), norms.begin() + n);
    const double threshold = params.breakdown_norm > 0.0 ? params.breakdown_norm : clean_max;

    for (auto method : params.methods) {
      const auto depths = sample_depths(method, all);
      std::vector<double> scores(depths.size());
      for (std::size_t i = 0; i < depths.size(); ++i) scores[i] = depths[i].score;
      for (auto policy : params.policies) {
        std::vector<std::size_t> order;
        const auto ranks = rank_scores(scores, policy, norms, &order);
        BreakdownRow row{run, method, policy, clean_max, norms[order.front()], 0.0, z.size() + 1, true, false};
        for (std::size_t i = 0; i < z.size(); ++i)
          if (ranks[i] <= n) row.max_norm_first_n = std::max(row.max_norm_first_n, norms[i]);
        for (std::size_t i = n; i < z.size(); ++i) {
          row.best_contaminant_rank = std::min(row.best_contaminant_rank, ranks[i]);
          if (ranks[i] <= n) row.contaminants_last = false;
        }
        row.rank1_broken = row.rank1_norm > threshold;
        report.rows.push_back(row);
      }
    }
  }

  for (auto method : params.methods)
    for (auto policy : params.policies) {
      BreakdownSummary s{method, policy, 0, 0, 0, 0.0};
      for (const auto& r : report.rows) {
        if (r.method != method || r.policy != policy) continue;
        ++s.runs;
        s.contaminants_last += r.contaminants_last ? 1 : 0;
        s.rank1_broken += r.rank1_broken ? 1 : 0;
        s.worst_max_norm_first_n = std::max(s.worst_max_norm_first_n, r.max_norm_first_n);
      }
      report.summary.push_back(s);
    }
  return report;
}

void EfficiencyParams::validate() const {
  if (d < 1 || n < 1) throw DomainError("efficiency needs d >= 1 and n >= 1");
  if (replications < 2) throw DomainError("efficiency needs at least 2 replications");
  cfg.validate();
  sigma_p(p);
}

EfficiencyReport efficiency_experiment(const EfficiencyParams& params) {
  params.validate();
  const HpdMatrix id = HpdMatrix::identity(params.d);
  std::vector<double> sq_median(params.replications), sq_mean(params.replications);
  std::vector<char> ok(params.replications, 0);
  parallel_for(params.replications, [&](std::size_t r) {
    const HpdSample s = sample_pgnd(id, params.p, params.n, derive_seed(params.seed, r));
    try {
      const double dm = dist(intrinsic_median(s, params.cfg), id);
      const double da = dist(intrinsic_mean(s, {}, params.cfg), id);
      sq_median[r] = dm * dm;
      sq_mean[r] = da * da;
      ok[r] = 1;
    } catch (const NumericalFailure&) {
      ok[r] = 0;
    }
  });

  EfficiencyReport rep;
  rep.params = params;
  std::vector<double> a, b;
  for (std::size_t r = 0; r < params.replications; ++r) {
    if (!ok[r]) {
      ++rep.failures;
      continue;
    }
    a.push_back(sq_median[r]);
    b.push_back(sq_mean[r]);
  }
  rep.used = a.size();
  if (rep.used < 2) throw NumericalFailure("efficiency experiment: too few converged replications");
  const double N = static_cast<double>(rep.used);
  for (std::size_t i = 0; i < a.size(); ++i) {
    rep.mse_median += a[i] / N;
    rep.mse_mean += b[i] / N;
  }
  rep.re = rep.mse_median / rep.mse_mean;
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - rep.mse_median) * (b[i] - rep.mse_mean);
  cov /= N - 1.0;
  const double var =
      (variance(a, rep.mse_median) - 2.0 * rep.re * cov + rep.re * rep.re * variance(b, rep.mse_mean)) /
      (N * rep.mse_mean * rep.mse_mean);
  rep.se = std::sqrt(std::max(0.0, var));
  return rep;
}

void TimingParams::validate() const {
  if (repetitions < 20) throw DomainError("timing needs at least 20 repetitions per cell");
  for (auto d : d_list)
    if (d < 1) throw DomainError("timing dimensions must be >= 1");
  for (auto n : n_list)
    if (n < 1) throw DomainError("timing sample sizes must be >= 1");
  for (auto method : methods)
    if (method != DepthMethod::zonoid && method != DepthMethod::gdd && method != DepthMethod::spatial)
      throw DomainError("timing supports the zonoid, gdd and spatial methods");
}

std::vector<TimingCell> timing_profile(const TimingParams& params) {
  params.validate();
  const std::size_t saved = thread_count();
  set_thread_count(1);
  std::vector<TimingCell> cells;
  try {
    std::uint64_t cell_index = 0;
    for (auto d : params.d_list)
      for (auto n : params.n_list) {
        const RngSeed seed = derive_seed(params.seed, cell_index++);
        const HpdSample sample = sample_lognormal(HpdMatrix::identity(d), 0.5, n, seed);
        const HpdMatrix query = sample_lognormal(HpdMatrix::identity(d), 0.5, 1, derive_seed(seed, 1))[0];
        for (auto method : params.methods) {
          if (method == DepthMethod::zonoid && d * d >= n) {
            cells.push_back({d, n, method, true, 0.0, 0});
            continue;
          }
          std::vector<double> ms(params.repetitions);
          for (auto& t : ms) {
            const auto start = std::chrono::steady_clock::now();
            volatile double v = depth(method, sample, query).value;
            (void)v;
            t = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          }
          std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
          double med = ms[ms.size() / 2];
          if (ms.size() % 2 == 0) med = 0.5 * (med + *std::max_element(ms.begin(), ms.begin() + ms.size() / 2));
          cells.push_back({d, n, method, false, med, params.repetitions});
        }
      }
  } catch (...) {
    set_thread_count(saved);
    throw;
  }
  set_thread_count(saved);
  return cells;
}

bool timing_monotone_in_n(std::span<const TimingCell> cells, DepthMethod method, std::size_t d, double slack) {
  std::vector<const TimingCell*> row;
  for (const auto& c : cells)
    if (c.method == method && c.d == d && !c.skipped) row.push_back(&c);
  std::sort(row.begin(), row.end(), [](auto a, auto b) { return a->n < b->n; });
  for (std::size_t i = 1; i < row.size(); ++i)
    if (row[i]->median_ms < (1.0 - slack) * row[i - 1]->median_ms) return false;
  return true;
}

void CoverageParams::validate() const {
  if (d < 1 || n < 2) throw DomainError("coverage needs d >= 1 and n >= 2");
  if (B < kMinBootstrapReplicates)
    throw DomainError("coverage needs B >= " + std::to_string(kMinBootstrapReplicates));
  if (simulations < 1) throw DomainError("coverage needs at least one simulation");
  if (alphas.empty()) throw DomainError("coverage needs at least one alpha");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  for (auto method : methods) {
    if (method != DepthMethod::zonoid && method != DepthMethod::gdd)
      throw DomainError("coverage supports the zonoid and gdd methods");
    if (method == DepthMethod::zonoid && (n <= d * d || B <= d * d))
      throw DomainError("zonoid requires n > d^2 and B > d^2");
  }
  cfg.validate();
  sigma_p(p);
}

CoverageReport coverage_experiment(const CoverageParams& params) {
  params.validate();
  const HpdMatrix id = HpdMatrix::identity(params.d);
  const std::size_t cells = params.methods.size() * params.alphas.size();
  std::vector<std::vector<double>> beta(cells), size(cells);
  std::vector<std::size_t> covered(cells, 0);

  CoverageReport rep;
  rep.params = params;
  for (std::size_t s = 0; s < params.simulations; ++s) {
    const HpdSample sample = sample_pgnd(id, params.p, params.n, derive_seed(params.seed, 2 * s));
    const BootstrapMeans boot = bootstrap_means(sample, params.B, params.cfg, derive_seed(params.seed, 2 * s + 1));
    rep.bootstrap_failures += boot.failures;
    const HpdMatrix center = intrinsic_mean(sample, {}, params.cfg);
    const HpdSample means(boot.means);
    for (std::size_t mi = 0; mi < params.methods.size(); ++mi) {
      const DepthMethod method = params.methods[mi];
      const auto depths = sample_depths(method, means);
      const double truth = depth(method, means, id).score;
      for (std::size_t ai = 0; ai < params.alphas.size(); ++ai) {
        const auto cr = confidence_region(boot, center, params.alphas[ai], method, depths);
        const std::size_t cell = mi * params.alphas.size() + ai;
        beta[cell].push_back(cr.beta_star);
        size[cell].push_back(cr.size);
        if (truth >= cr.beta_score || scores_tied(truth, cr.beta_score)) ++covered[cell];
      }
    }
  }

  const double N = static_cast<double>(params.simulations);
  for (std::size_t mi = 0; mi < params.methods.size(); ++mi)
    for (std::size_t ai = 0; ai < params.alphas.size(); ++ai) {
      const std::size_t cell = mi * params.alphas.size() + ai;
      CoverageRow row{params.methods[mi], params.alphas[ai], 0.0, 0.0, 0.0, 0.0, params.simulations};
      for (double b : beta[cell]) row.avg_beta += b / N;
      for (double v : size[cell]) row.avg_size += v / N;
      row.se_size = std::sqrt(variance(size[cell], row.avg_size) / N);
      row.coverage = static_cast<double>(covered[cell]) / N;
      rep.rows.push_back(row);
    }
  return rep;
}

}  // namespace hpd
