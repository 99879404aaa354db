#include "hpd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hpd/errors.hpp"

namespace hpd {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kOptimalityTol = 1e-9;
constexpr double kFeasibilityTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class State { basic, at_lower, at_upper };

/// Dense bounded-variable simplex on a tableau kept in basis-inverse form.
class BoundedSimplex {
 public:
  BoundedSimplex(std::size_t rows, std::size_t cols, long iteration_budget)
      : m_(rows), n_(cols), t_(rows * cols, 0.0), x_(cols, 0.0), lo_(cols, 0.0), up_(cols, kInf),
        cost_(cols, 0.0), d_(cols, 0.0), state_(cols, State::at_lower), basis_(rows, 0),
        budget_(iteration_budget) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * n_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * n_ + c]; }

  void set_bounds(std::size_t j, double lo, double up) { lo_[j] = lo; up_[j] = up; }
  void set_nonbasic(std::size_t j, State s) {
    state_[j] = s;
    x_[j] = s == State::at_upper ? up_[j] : lo_[j];
  }
  void set_basic(std::size_t r, std::size_t j, double value) {
    basis_[r] = j;
    state_[j] = State::basic;
    x_[j] = value;
  }
  double value(std::size_t j) const { return x_[j]; }
  void force_value(std::size_t j, double v) { x_[j] = v; }

  void set_costs(std::vector<double> c) {
    cost_ = std::move(c);
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] == State::basic) {
        d_[j] = 0.0;
        continue;
      }
      double s = cost_[j];
      for (std::size_t r = 0; r < m_; ++r) s -= cost_[basis_[r]] * at(r, j);
      d_[j] = s;
    }
  }

  void solve() {
    bool bland = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      const auto [j, dir] = price(bland);
      if (dir == 0) return;
      if (--budget_ < 0) throw NumericalFailure("zonoid LP exceeded its iteration cap");
      const double theta = step(j, dir, bland);
      if (theta <= 1e-14) {
        if (++degenerate_run > m_ + 2) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
  }

 private:
  std::pair<std::size_t, int> price(bool bland) const {
    std::size_t best = n_;
    int best_dir = 0;
    double best_score = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      int dir = 0;
      if (state_[j] == State::at_lower && d_[j] < -kOptimalityTol && up_[j] > lo_[j]) dir = 1;
      else if (state_[j] == State::at_upper && d_[j] > kOptimalityTol) dir = -1;
      if (dir == 0) continue;
      if (bland) return {j, dir};
      if (std::abs(d_[j]) > best_score) {
        best = j;
        best_dir = dir;
        best_score = std::abs(d_[j]);
      }
    }
    return {best, best_dir};
  }

  double step(std::size_t j, int dir, bool bland) {
    double theta = up_[j] - lo_[j];
    std::size_t leave = m_;
    bool leave_to_upper = false;
    for (std::size_t r = 0; r < m_; ++r) {
      const double a = at(r, j);
      if (std::abs(a) <= kPivotTol) continue;
      const double rate = -dir * a;
      const std::size_t b = basis_[r];
      double limit;
      bool to_upper;
      if (rate < 0.0) {
        limit = (x_[b] - lo_[b]) / -rate;
        to_upper = false;
      } else {
        if (up_[b] == kInf) continue;
        limit = (up_[b] - x_[b]) / rate;
        to_upper = true;
      }
      limit = std::max(limit, 0.0);
      bool take = limit < theta - 1e-12;
      if (!take && leave != m_ && limit <= theta + 1e-12) {
        take = bland ? basis_[r] < basis_[leave] : std::abs(a) > std::abs(at(leave, j));
      }
      if (take) {
        theta = std::min(theta, limit);
        leave = r;
        leave_to_upper = to_upper;
      }
    }
    if (theta == kInf) throw NumericalFailure("zonoid LP is unbounded");

    x_[j] += dir * theta;
    for (std::size_t r = 0; r < m_; ++r) x_[basis_[r]] -= dir * at(r, j) * theta;

    if (leave == m_) {
      state_[j] = dir > 0 ? State::at_upper : State::at_lower;
      x_[j] = dir > 0 ? up_[j] : lo_[j];
      return theta;
    }
    const std::size_t out = basis_[leave];
    state_[out] = leave_to_upper ? State::at_upper : State::at_lower;
    x_[out] = leave_to_upper ? up_[out] : lo_[out];
    pivot(leave, j);
    return theta;
  }

  void pivot(std::size_t r, std::size_t j) {
    double* row = &t_[r * n_];
    const double inv = 1.0 / row[j];
    for (std::size_t c = 0; c < n_; ++c) row[c] *= inv;
    row[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* other = &t_[i * n_];
      const double f = other[j];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n_; ++c) other[c] -= f * row[c];
      other[j] = 0.0;
    }
    const double f = d_[j];
    for (std::size_t c = 0; c < n_; ++c) d_[c] -= f * row[c];
    d_[j] = 0.0;
    basis_[r] = j;
    state_[j] = State::basic;
  }

  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<double> x_, lo_, up_, cost_, d_;
  std::vector<State> state_;
  std::vector<std::size_t> basis_;
  long budget_;
};

}  // namespace

ZonoidLp::ZonoidLp(std::size_t k_, std::vector<double> pts) : k(k_), points(std::move(pts)) {
  if (k == 0) throw DomainError("zonoid LP: dimension must be positive");
  if (points.empty() || points.size() % k != 0)
    throw DomainError("zonoid LP: point array length " + std::to_string(points.size()) +
                      " is not a positive multiple of " + std::to_string(k));
  for (double v : points)
    if (!std::isfinite(v)) throw DomainError("zonoid LP: non-finite coordinate");
}

double zonoid_alpha(const ZonoidLp& lp) {
  const std::size_t n = lp.size();
  const std::size_t k = lp.k;
  if (n == 0) throw DomainError("zonoid LP: no points");

  // Coordinate rows scaled to unit max-abs; all-zero rows are redundant.
  std::vector<std::size_t> coord;
  std::vector<double> scale;
  for (std::size_t c = 0; c < k; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s = std::max(s, std::abs(lp.points[i * k + c]));
    if (s > 0.0) {
      coord.push_back(c);
      scale.push_back(s);
    }
  }
  const std::size_t kr = coord.size();
  const std::size_t rows = kr + 1;
  const std::size_t s_col = n;
  const std::size_t cols = n + 1 + kr;  // mu_1..mu_n, s, artificials

  BoundedSimplex sx(rows, cols, static_cast<long>(50 * (n + k)));
  for (std::size_t i = 0; i < n; ++i) sx.set_bounds(i, 0.0, 1.0);

  // Start from mu = 1; artificial r absorbs the residual of coordinate row r,
  // with the row sign chosen so the artificial is nonnegative.
  double infeasibility = 0.0;
  for (std::size_t r = 0; r < kr; ++r) {
    double residual = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = lp.points[i * k + coord[r]] / scale[r];
      residual -= v;
      if (first == 0.0) first = v;
    }
    const double sign = residual > 0.0 ? 1.0 : residual < 0.0 ? -1.0 : (first >= 0.0 ? 1.0 : -1.0);
    for (std::size_t i = 0; i < n; ++i) sx.at(r, i) = sign * lp.points[i * k + coord[r]] / scale[r];
    sx.at(r, n + 1 + r) = 1.0;
    sx.set_basic(r, n + 1 + r, std::abs(residual));
    infeasibility += std::abs(residual);
  }
  // -sum(mu) + s = -1, s basic at n - 1.
  for (std::size_t i = 0; i < n; ++i) sx.at(kr, i) = -1.0;
  sx.at(kr, s_col) = 1.0;
  for (std::size_t i = 0; i < n; ++i) sx.set_nonbasic(i, State::at_upper);
  sx.set_basic(kr, s_col, static_cast<double>(n) - 1.0);

  std::vector<double> cost(cols, 0.0);
  for (std::size_t r = 0; r < kr; ++r) cost[n + 1 + r] = 1.0;
  sx.set_costs(cost);
  sx.solve();

  double phase1 = 0.0;
  for (std::size_t r = 0; r < kr; ++r) phase1 += std::max(0.0, sx.value(n + 1 + r));
  if (phase1 > kFeasibilityTol * (1.0 + infeasibility)) return 0.0;

  for (std::size_t r = 0; r < kr; ++r) {
    sx.set_bounds(n + 1 + r, 0.0, 0.0);
    sx.force_value(n + 1 + r, 0.0);
  }
  std::fill(cost.begin(), cost.end(), 0.0);
  cost[s_col] = -1.0;
  sx.set_costs(cost);
  sx.solve();

  const double alpha = (1.0 + sx.value(s_col)) / static_cast<double>(n);
  return std::clamp(alpha, 0.0, 1.0);
}

}  // namespace hpd
