#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "hpd/hermitian.hpp"

namespace hpd {

/// Ordered collection of HPD matrices of a common dimension, with a lazily
/// built pairwise distance matrix (packed lower triangle). Copies share the
/// cache; observations are immutable.
class HpdSample {
 public:
  explicit HpdSample(std::vector<HpdMatrix> obs);

  std::size_t size() const { return obs_.size(); }
  std::size_t dim() const { return dim_; }
  const HpdMatrix& operator[](std::size_t i) const { return obs_[i]; }
  std::span<const HpdMatrix> observations() const { return obs_; }

  /// dist(x_i, x_j) from the cache; builds the cache on first use.
  double distance(std::size_t i, std::size_t j) const;
  bool has_distance_cache() const;
  /// Forces construction of the distance cache (data-parallel).
  void build_distance_cache() const;
  /// Row sums of the distance matrix.
  std::vector<double> distance_sums() const;

  /// Sample with observations obs[indices[k]]; inherits distances when the
  /// cache of this sample is already built.
  HpdSample resample(std::span<const std::size_t> indices) const;
  /// a * x_i for every observation.
  HpdSample congruence(const CMatrix& a) const;

 private:
  struct DistanceCache {
    std::once_flag once;
    std::atomic<bool> ready{false};
    std::vector<double> packed;  // (i, j) with i > j at i*(i-1)/2 + j
  };
  static std::size_t packed_index(std::size_t i, std::size_t j);

  std::size_t dim_;
  std::vector<HpdMatrix> obs_;
  std::shared_ptr<DistanceCache> cache_;
};

using HpdCurve = std::vector<HpdMatrix>;

/// n curves sampled on a common ascending grid of T curve indices.
class HpdCurveSample {
 public:
  HpdCurveSample(std::vector<double> grid, std::vector<HpdCurve> curves);

  std::size_t size() const { return curves_.size(); }
  std::size_t grid_size() const { return grid_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const double> grid() const { return grid_; }
  const HpdCurve& curve(std::size_t i) const { return curves_[i]; }
  /// Cross-section of all curves at grid index t.
  const HpdSample& slice(std::size_t t) const { return slices_[t]; }

 private:
  std::size_t dim_;
  std::vector<double> grid_;
  std::vector<HpdCurve> curves_;
  std::vector<HpdSample> slices_;
};

/// Trapezoidal average of values over the grid, normalized by grid length.
/// A single-point grid returns the value itself.
double trapezoid_average(std::span<const double> grid, std::span<const double> values);

}  // namespace hpd
