#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hpd {

/// Point cloud for the zonoid depth of the origin: n points in R^k, stored
/// row-major (point i occupies points[i*k .. i*k+k)).
struct ZonoidLp {
  std::size_t k = 0;
  std::vector<double> points;

  ZonoidLp() = default;
  ZonoidLp(std::size_t k, std::vector<double> points);

  std::size_t size() const { return k == 0 ? 0 : points.size() / k; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * k, k}; }
};

/// Zonoid depth of the origin with respect to the empirical distribution of
/// the points: the largest alpha such that the origin is a convex combination
/// with weights bounded by 1/(n alpha); 0 outside the convex hull.
///
/// Solved as max sum(mu) s.t. sum mu_i x_i = 0, 0 <= mu_i <= 1, sum(mu) >= 1,
/// which gives alpha = max sum(mu) / n. Two-phase bounded-variable simplex,
/// Dantzig pricing with a switch to Bland's rule on degenerate runs.
/// Throws NumericalFailure when 50 (n + k) iterations are exceeded.
double zonoid_alpha(const ZonoidLp& lp);

}  // namespace hpd
