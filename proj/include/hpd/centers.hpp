#pragma once

#include <optional>
#include <span>

#include "hpd/sample.hpp"

namespace hpd {

struct SolverConfig {
  int max_iter = 200;
  double tol = 1e-10;  // threshold on the Riemannian norm of the update
  double step = 1.0;   // initial step; halved whenever the objective increases

  void validate() const;
};

struct CenterResult {
  HpdMatrix point;
  /// Mean: ||sum_i w_i Log_mu(x_i)||_mu. Median: ||sum_i Log_m(x_i)/dist(m, x_i)||_m
  /// over the observations not coinciding with m.
  double residual;
  int iterations;
};

/// Solver ran out of iterations (or its step collapsed) before meeting the
/// tolerance. Carries the last iterate.
class ConvergenceError : public NumericalFailure {
 public:
  ConvergenceError(const std::string& what, HpdMatrix last, double residual, int iterations)
      : NumericalFailure(what), last_(std::move(last)), residual_(residual), iterations_(iterations) {}

  const HpdMatrix& last_iterate() const { return last_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  HpdMatrix last_;
  double residual_;
  int iterations_;
};

/// Index of the observation with the smallest (weighted) sum of distances to
/// the others. For n > 512 without a built distance cache the search runs on
/// an evenly strided subset of 512 observations.
std::size_t medoid_index(const HpdSample& sample, std::span<const double> weights = {});

/// Karcher mean by Riemannian gradient descent mu <- Exp_mu(step * sum_i w_i Log_mu(x_i)),
/// started at the medoid. Weights default to uniform and must be nonnegative
/// and sum to one.
CenterResult solve_intrinsic_mean(const HpdSample& sample, std::span<const double> weights = {},
                                  const SolverConfig& cfg = {});
HpdMatrix intrinsic_mean(const HpdSample& sample, std::span<const double> weights = {},
                         const SolverConfig& cfg = {});

/// Geometric median by guarded Weiszfeld iteration on the manifold.
CenterResult solve_intrinsic_median(const HpdSample& sample, const SolverConfig& cfg = {});
HpdMatrix intrinsic_median(const HpdSample& sample, const SolverConfig& cfg = {});

/// Iterates closer than this to an observation drop its Weiszfeld term.
inline constexpr double kMedianCoincidence = 1e-12;

}  // namespace hpd
