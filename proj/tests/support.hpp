#pragma once

#include <cmath>
#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "hpd/hermitian.hpp"
#include "hpd/manifold.hpp"
#include "hpd/sampling.hpp"

namespace testing {

inline hpd::HermitianMatrix random_hermitian(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  hpd::CMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = i == j ? 0.0 : normal(rng);
      m(i, j) = {re, im};
    }
  return hpd::HermitianMatrix::symmetrized(m);
}

inline double max_diff(const hpd::CMatrix& a, const hpd::CMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_diff(const hpd::HermitianMatrix& a, const hpd::HermitianMatrix& b) {
  return max_diff(a.matrix(), b.matrix());
}

inline double max_diff(const hpd::HpdMatrix& a, const hpd::HpdMatrix& b) {
  return max_diff(a.matrix(), b.matrix());
}

inline hpd::HpdMatrix diag(std::vector<double> v) {
  return hpd::HpdMatrix(hpd::HermitianMatrix::diagonal(v));
}

inline hpd::HpdMatrix scalar1(double x) { return hpd::HpdMatrix::scalar(1, x); }

/// Sample of 1x1 matrices exp(logs[i]).
inline hpd::HpdSample line_sample(const std::vector<double>& logs) {
  std::vector<hpd::HpdMatrix> obs;
  for (double l : logs) obs.push_back(scalar1(std::exp(l)));
  return hpd::HpdSample(std::move(obs));
}

/// Euclidean zonoid depth of 0 w.r.t. points on the line: fractional knapsack
/// that fills the lighter side completely and the heavier side smallest-first.
inline double zonoid_1d_oracle(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  std::vector<double> pos, neg;
  double zeros = 0.0;
  for (double v : x) {
    if (v > 0) pos.push_back(v);
    else if (v < 0) neg.push_back(-v);
    else zeros += 1.0;
  }
  double sp = 0, sn = 0;
  for (double v : pos) sp += v;
  for (double v : neg) sn += v;
  if (sp > sn) std::swap(pos, neg), std::swap(sp, sn);
  // pos is the lighter side: all of it is used.
  double count = zeros + static_cast<double>(pos.size());
  std::sort(neg.begin(), neg.end());
  double remaining = sp;
  for (double v : neg) {
    if (remaining <= 0) break;
    const double take = std::min(1.0, remaining / v);
    count += take;
    remaining -= take * v;
  }
  if (count < 1.0 - 1e-12) return 0.0;
  return count / n;
}

/// max sum(mu), mu in [0,1]^n, sum mu_i x_i = 0, by enumerating vertices: every
/// split of the indices into {0}, {1} and at most k free coordinates solved
/// from the equality system. Returns alpha = max / n (0 if max < 1).
inline double zonoid_vertex_oracle(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  const std::size_t k = pts.front().size();
  double best = 0.0;
  std::vector<int> state(n, 0);  // 0, 1, 2 = free
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    std::vector<std::size_t> free;
    std::vector<double> rhs(k, 0.0);
    double fixed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
      if (state[i] == 2) free.push_back(i);
      if (state[i] == 1) {
        fixed += 1.0;
        for (std::size_t r = 0; r < k; ++r) rhs[r] -= pts[i][r];
      }
    }
    if (free.size() > k) continue;
    const std::size_t f = free.size();
    // Least squares on the k x f system via normal equations; accept exact solutions only.
    std::vector<double> mu(f, 0.0);
    if (f > 0) {
      std::vector<double> ata(f * f, 0.0), atb(f, 0.0);
      for (std::size_t a = 0; a < f; ++a) {
        for (std::size_t b = 0; b < f; ++b)
          for (std::size_t r = 0; r < k; ++r) ata[a * f + b] += pts[free[a]][r] * pts[free[b]][r];
        for (std::size_t r = 0; r < k; ++r) atb[a] += pts[free[a]][r] * rhs[r];
      }
      // Gaussian elimination with partial pivoting.
      bool singular = false;
      for (std::size_t col = 0; col < f && !singular; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < f; ++r)
          if (std::abs(ata[r * f + col]) > std::abs(ata[piv * f + col])) piv = r;
        if (std::abs(ata[piv * f + col]) < 1e-12) {
          singular = true;
          break;
        }
        for (std::size_t q = 0; q < f; ++q) std::swap(ata[col * f + q], ata[piv * f + q]);
        std::swap(atb[col], atb[piv]);
        for (std::size_t r = 0; r < f; ++r) {
          if (r == col) continue;
          const double m = ata[r * f + col] / ata[col * f + col];
          for (std::size_t q = 0; q < f; ++q) ata[r * f + q] -= m * ata[col * f + q];
          atb[r] -= m * atb[col];
        }
      }
      if (singular) continue;
      for (std::size_t a = 0; a < f; ++a) mu[a] = atb[a] / ata[a * f + a];
    }
    bool ok = true;
    for (double v : mu)
      if (v < -1e-10 || v > 1 + 1e-10) ok = false;
    for (std::size_t r = 0; r < k && ok; ++r) {
      double s = -rhs[r];
      for (std::size_t a = 0; a < f; ++a) s += mu[a] * pts[free[a]][r];
      // s = sum over fixed-one points plus free contributions must vanish
      if (std::abs(s) > 1e-9) ok = false;
    }
    if (!ok) continue;
    double total_mu = fixed;
    for (double v : mu) total_mu += std::clamp(v, 0.0, 1.0);
    best = std::max(best, total_mu);
  }
  if (best < 1.0 - 1e-9) return 0.0;
  return best / static_cast<double>(n);
}


/// Zonoid depth of the origin by brute force over a grid of the weight
/// simplex slice {lambda >= 0, sum lambda = 1, sum lambda_i x_i = 0}. The slice
/// is parametrized by n - k - 1 <= 2 free weights; the remaining k + 1 weights
/// are solved for, using the best-conditioned choice of dependent points.
/// The free weights are scanned on a grid of the given step, then on three
/// successively 10x finer grids around the incumbent (max lambda is convex in
/// the free weights). Returns 1/(n min max lambda), or 0 if nothing is feasible.
inline double zonoid_grid_oracle(const std::vector<std::vector<double>>& pts, double step) {
  const std::size_t n = pts.size();
  const std::size_t k = pts.front().size();
  const std::size_t m = k + 1;
  if (n < m || n - m > 2) throw std::invalid_argument("grid oracle needs n - k - 1 in {0, 1, 2}");

  // Gaussian elimination with partial pivoting on an m x m row-major system.
  auto solve = [&](std::vector<double> a, std::vector<double> b, std::vector<double>& x, double* det) {
    double dt = 1.0;
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m; ++r)
        if (std::abs(a[r * m + c]) > std::abs(a[p * m + c])) p = r;
      if (std::abs(a[p * m + c]) < 1e-14) return false;
      for (std::size_t q = 0; q < m; ++q) std::swap(a[c * m + q], a[p * m + q]);
      std::swap(b[c], b[p]);
      dt *= a[c * m + c];
      for (std::size_t r = c + 1; r < m; ++r) {
        const double f = a[r * m + c] / a[c * m + c];
        for (std::size_t q = c; q < m; ++q) a[r * m + q] -= f * a[c * m + q];
        b[r] -= f * b[c];
      }
    }
    x.assign(m, 0.0);
    for (std::size_t c = m; c-- > 0;) {
      double s = b[c];
      for (std::size_t q = c + 1; q < m; ++q) s -= a[c * m + q] * x[q];
      x[c] = s / a[c * m + c];
    }
    if (det) *det = std::abs(dt);
    return true;
  };
  auto system = [&](const std::vector<std::size_t>& dep) {
    std::vector<double> a(m * m);
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t r = 0; r < k; ++r) a[r * m + c] = pts[dep[c]][r];
      a[k * m + c] = 1.0;
    }
    return a;
  };

  std::vector<std::size_t> dep, fr;
  double best_det = -1.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m) continue;
    std::vector<std::size_t> d, f;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? d : f).push_back(i);
    std::vector<double> x;
    double det = 0.0;
    if (solve(system(d), std::vector<double>(m, 0.0), x, &det) && det > best_det) {
      best_det = det;
      dep = d;
      fr = f;
    }
  }
  if (best_det < 0.0) return 0.0;
  const std::vector<double> a = system(dep);

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_f(fr.size(), 0.0), x;
  auto visit = [&](const std::vector<double>& lam_f) {
    std::vector<double> b(m, 0.0);
    double used = 0.0, g = 0.0;
    for (std::size_t j = 0; j < fr.size(); ++j) {
      if (lam_f[j] < 0.0) return;
      used += lam_f[j];
      g = std::max(g, lam_f[j]);
      for (std::size_t r = 0; r < k; ++r) b[r] -= lam_f[j] * pts[fr[j]][r];
    }
    b[k] = 1.0 - used;
    if (!solve(a, b, x, nullptr)) return;
    for (double v : x) {
      if (v < -1e-12) return;
      g = std::max(g, v);
    }
    if (g < best) {
      best = g;
      best_f = lam_f;
    }
  };
  auto scan = [&](std::vector<double> lo, double h, std::size_t count) {
    std::vector<double> lam(fr.size());
    if (fr.size() == 1) {
      for (std::size_t i = 0; i <= count; ++i) {
        lam[0] = lo[0] + i * h;
        visit(lam);
      }
    } else {
      for (std::size_t i = 0; i <= count; ++i)
        for (std::size_t j = 0; j <= count; ++j) {
          lam[0] = lo[0] + i * h;
          lam[1] = lo[1] + j * h;
          visit(lam);
        }
    }
  };

  if (fr.empty()) {
    visit({});
  } else {
    scan(std::vector<double>(fr.size(), 0.0), step, static_cast<std::size_t>(std::llround(1.0 / step)));
    double h = step;
    for (int level = 0; level < 3 && std::isfinite(best); ++level) {
      std::vector<double> lo(fr.size());
      for (std::size_t j = 0; j < fr.size(); ++j) lo[j] = best_f[j] - 5.0 * h;
      h /= 10.0;
      scan(lo, h, 100);
    }
  }
  if (!std::isfinite(best)) return 0.0;
  return 1.0 / (static_cast<double>(n) * best);
}

}  // namespace testing
