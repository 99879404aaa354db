#include "hpd/sample.hpp"

#include <string>

#include "hpd/manifold.hpp"
#include "hpd/parallel.hpp"

namespace hpd {

HpdSample::HpdSample(std::vector<HpdMatrix> obs)
    : dim_(obs.empty() ? 0 : obs.front().dim()),
      obs_(std::move(obs)),
      cache_(std::make_shared<DistanceCache>()) {
  if (obs_.empty()) throw DomainError("sample must contain at least one observation");
  for (std::size_t i = 0; i < obs_.size(); ++i)
    if (obs_[i].dim() != dim_)
      throw DomainError("observation " + std::to_string(i) + " has dimension " +
                        std::to_string(obs_[i].dim()) + ", expected " + std::to_string(dim_));
}

std::size_t HpdSample::packed_index(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  return i * (i - 1) / 2 + j;
}

void HpdSample::build_distance_cache() const {
  std::call_once(cache_->once, [this] {
    const std::size_t n = obs_.size();
    std::vector<double> packed(n * (n - 1) / 2);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < i; ++j) packed[packed_index(i, j)] = dist(obs_[i], obs_[j]);
    });
    cache_->packed = std::move(packed);
    cache_->ready = true;
  });
}

bool HpdSample::has_distance_cache() const {
  return obs_.size() < 2 || cache_->ready.load();
}

double HpdSample::distance(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  build_distance_cache();
  return cache_->packed[packed_index(i, j)];
}

std::vector<double> HpdSample::distance_sums() const {
  const std::size_t n = obs_.size();
  std::vector<double> sums(n, 0.0);
  if (n < 2) return sums;
  build_distance_cache();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = cache_->packed[packed_index(i, j)];
      sums[i] += v;
      sums[j] += v;
    }
  return sums;
}

HpdSample HpdSample::resample(std::span<const std::size_t> indices) const {
  std::vector<HpdMatrix> obs;
  obs.reserve(indices.size());
  for (std::size_t k : indices) {
    if (k >= obs_.size()) throw DomainError("resample index out of range");
    obs.push_back(obs_[k]);
  }
  HpdSample out(std::move(obs));
  if (obs_.size() >= 2 && cache_->ready.load()) {
    std::call_once(out.cache_->once, [&] {
      const std::size_t m = indices.size();
      std::vector<double> packed(m * (m - 1) / 2);
      for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j)
          packed[packed_index(i, j)] =
              indices[i] == indices[j] ? 0.0 : cache_->packed[packed_index(indices[i], indices[j])];
      out.cache_->packed = std::move(packed);
      out.cache_->ready = true;
    });
  }
  return out;
}

HpdSample HpdSample::congruence(const CMatrix& a) const {
  std::vector<HpdMatrix> obs;
  obs.reserve(obs_.size());
  for (const auto& x : obs_) obs.push_back(hpd::congruence(a, x));
  return HpdSample(std::move(obs));
}

HpdCurveSample::HpdCurveSample(std::vector<double> grid, std::vector<HpdCurve> curves)
    : dim_(0), grid_(std::move(grid)), curves_(std::move(curves)) {
  if (grid_.empty()) throw DomainError("curve grid must contain at least one point");
  if (curves_.empty()) throw DomainError("curve sample must contain at least one curve");
  for (std::size_t t = 1; t < grid_.size(); ++t)
    if (!(grid_[t] > grid_[t - 1])) throw DomainError("curve grid must be strictly ascending");
  const std::size_t T = grid_.size();
  for (std::size_t i = 0; i < curves_.size(); ++i)
    if (curves_[i].size() != T)
      throw DomainError("curve " + std::to_string(i) + " has " + std::to_string(curves_[i].size()) +
                        " points, grid has " + std::to_string(T));
  dim_ = curves_.front().front().dim();
  slices_.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<HpdMatrix> obs;
    obs.reserve(curves_.size());
    for (const auto& c : curves_) obs.push_back(c[t]);
    slices_.emplace_back(std::move(obs));
    if (slices_.back().dim() != dim_) throw DomainError("curves have mixed dimensions");
  }
}

double trapezoid_average(std::span<const double> grid, std::span<const double> values) {
  if (grid.size() != values.size() || grid.empty())
    throw DomainError("trapezoid: grid and values differ in length");
  if (grid.size() == 1) return values[0];
  double s = 0.0;
  for (std::size_t t = 1; t < grid.size(); ++t)
    s += 0.5 * (values[t] + values[t - 1]) * (grid[t] - grid[t - 1]);
  return s / (grid.back() - grid.front());
}

}  // namespace hpd
