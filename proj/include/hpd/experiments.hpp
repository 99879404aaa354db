#pragma once

#include <string_view>
#include <vector>

#include "hpd/centers.hpp"
#include "hpd/depth.hpp"
#include "hpd/sampling.hpp"

namespace hpd {

/// Seed of sub-experiment k, drawn from stream k of the parent seed.
RngSeed derive_seed(RngSeed parent, std::uint64_t k);

// ---- breakdown ------------------------------------------------------------

/// replicated: m copies of y = Exp(s h).
/// adversarial: m-1 copies of y1 = Exp(s h) plus y2 = intrinsic mean of X and
/// the copies, which has maximal zonoid depth.
enum class ContaminationMode { replicated, adversarial };
/// canonical: h = first canonical basis element diag(1, 0, ...).
/// random: uniformly random unit direction among diagonal matrices. Rotated
/// directions are not representable at large norms.
enum class DirectionMode { canonical, random };

std::string_view to_string(ContaminationMode m);
std::string_view to_string(DirectionMode m);
ContaminationMode parse_contamination_mode(std::string_view s);
DirectionMode parse_direction_mode(std::string_view s);

/// Largest contamination norm whose contaminants pass the positive-definiteness
/// check (condition number e^s below 1e100) for the canonical direction; a
/// random diagonal direction allows kMaxContaminationNorm / sqrt(2).
inline constexpr double kMaxContaminationNorm = 230.0;

struct BreakdownParams {
  std::size_t n = 50;
  std::size_t m = 25;
  std::size_t d = 2;
  double contamination_norm = 200.0;
  double sigma = 0.5;          // log-normal scale of the clean sample
  double breakdown_norm = 0.0; // rank-1 norm counted as broken; 0 means the clean maximum
  ContaminationMode mode = ContaminationMode::replicated;
  DirectionMode direction = DirectionMode::canonical;
  std::size_t runs = 1;        // independent seeds derived from seed
  std::vector<DepthMethod> methods{DepthMethod::zonoid, DepthMethod::gdd};
  std::vector<TiePolicy> policies{TiePolicy::shared, TiePolicy::frobenius};
  RngSeed seed{1};

  void validate() const;
};

struct BreakdownRow {
  std::size_t run;
  DepthMethod method;
  TiePolicy policy;
  double clean_max_norm;     // max ||Log x_i||_F over the clean sample
  double rank1_norm;         // ||Log z_[1]||_F
  double max_norm_first_n;   // max over ranks 1..n of ||Log z_[i]||_F
  std::size_t best_contaminant_rank;
  bool contaminants_last;    // every contaminant ranked after n
  bool rank1_broken;         // rank1_norm > breakdown threshold
};

struct BreakdownSummary {
  DepthMethod method;
  TiePolicy policy;
  std::size_t runs;
  std::size_t contaminants_last;
  std::size_t rank1_broken;
  double worst_max_norm_first_n;
};

struct BreakdownReport {
  BreakdownParams params;
  std::vector<BreakdownRow> rows;
  std::vector<BreakdownSummary> summary;
};

BreakdownReport breakdown_rank_experiment(const BreakdownParams& params);

// ---- efficiency -----------------------------------------------------------

struct EfficiencyParams {
  std::size_t d = 2;
  std::size_t n = 50;
  double p = 5.0;
  std::size_t replications = 500;
  SolverConfig cfg{};
  RngSeed seed{1};

  void validate() const;
};

/// re = mean(delta(median, Id)^2) / mean(delta(mean, Id)^2); se by the delta
/// method for a ratio of means.
struct EfficiencyReport {
  EfficiencyParams params;
  double mse_median = 0.0;
  double mse_mean = 0.0;
  double re = 0.0;
  double se = 0.0;
  std::size_t used = 0;
  std::size_t failures = 0;
};

EfficiencyReport efficiency_experiment(const EfficiencyParams& params);

// ---- timing ---------------------------------------------------------------

struct TimingParams {
  std::vector<std::size_t> d_list{2, 3};
  std::vector<std::size_t> n_list{25, 50, 100, 200};
  std::vector<DepthMethod> methods{DepthMethod::zonoid, DepthMethod::gdd, DepthMethod::spatial};
  std::size_t repetitions = 20;
  RngSeed seed{1};

  void validate() const;
};

struct TimingCell {
  std::size_t d;
  std::size_t n;
  DepthMethod method;
  bool skipped;          // zonoid with d^2 >= n
  double median_ms;
  std::size_t repetitions;
};

/// Median wall time of one out-of-sample depth evaluation per cell, on one
/// worker thread.
std::vector<TimingCell> timing_profile(const TimingParams& params);

/// Times for (method, d) are nondecreasing in n up to a relative slack.
bool timing_monotone_in_n(std::span<const TimingCell> cells, DepthMethod method, std::size_t d,
                          double slack = 0.2);

// ---- coverage -------------------------------------------------------------

struct CoverageParams {
  std::size_t d = 2;
  std::size_t n = 100;
  double p = 2.0;
  std::size_t B = 500;
  std::size_t simulations = 200;
  std::vector<double> alphas{0.2, 0.1, 0.05};
  std::vector<DepthMethod> methods{DepthMethod::zonoid, DepthMethod::gdd};
  SolverConfig cfg{};
  RngSeed seed{1};

  void validate() const;
};

struct CoverageRow {
  DepthMethod method;
  double alpha;
  double avg_beta;
  double avg_size;
  double se_size;
  double coverage;   // fraction of simulations whose region contains Id
  std::size_t simulations;
};

struct CoverageReport {
  CoverageParams params;
  std::vector<CoverageRow> rows;
  std::size_t bootstrap_failures = 0;
};

CoverageReport coverage_experiment(const CoverageParams& params);

}  // namespace hpd
