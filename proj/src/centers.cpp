#include "hpd/centers.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hpd/manifold.hpp"
#include "hpd/parallel.hpp"

namespace hpd {

namespace {

constexpr std::size_t kMedoidSubset = 512;
constexpr int kMaxHalvings = 60;
constexpr double kObjectiveSlack = 1e-12;
// Halvings after which the best rounding-level step is taken anyway.
constexpr int kNoiseHalvings = 8;

std::vector<double> checked_weights(std::size_t n, std::span<const double> weights) {
  if (weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (weights.size() != n)
    throw DomainError("weights have length " + std::to_string(weights.size()) + ", sample has " +
                      std::to_string(n));
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("weights must sum to one");
  return {weights.begin(), weights.end()};
}

struct Logs {
  std::vector<HermitianMatrix> v;  // whitened Log at the current point
  std::vector<double> d;           // their Frobenius norms
};

Logs whitened_logs(const NormalFrame& f, const HpdSample& s) {
  Logs out;
  out.v.resize(s.size());
  out.d.resize(s.size());
  parallel_for(s.size(), [&](std::size_t i) {
    out.v[i] = f.log(s[i]);
    out.d[i] = out.v[i].frobenius_norm();
  });
  return out;
}

std::vector<double> subset_distance_sums(const HpdSample& s, std::span<const std::size_t> idx,
                                         std::span<const double> w) {
  const std::size_t m = idx.size();
  std::vector<double> sums(m, 0.0);
  parallel_for(m, [&](std::size_t a) {
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) sums[a] += w[idx[b]] * dist(s[idx[a]], s[idx[b]]);
  });
  return sums;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tol must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be positive");
}

std::size_t medoid_index(const HpdSample& sample, std::span<const double> weights) {
  const std::size_t n = sample.size();
  const std::vector<double> w = checked_weights(n, weights);
  if (n == 1) return 0;

  std::vector<std::size_t> idx;
  std::vector<double> sums;
  if (n > kMedoidSubset && !sample.has_distance_cache()) {
    idx.reserve(kMedoidSubset);
    for (std::size_t k = 0; k < kMedoidSubset; ++k) idx.push_back(k * n / kMedoidSubset);
    sums = subset_distance_sums(sample, idx, w);
  } else {
    idx.resize(n);
    sums.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = i;
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sums[i] += w[j] * sample.distance(i, j);
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < idx.size(); ++k)
    if (sums[k] < sums[best]) best = k;
  return idx[best];
}

CenterResult solve_intrinsic_mean(const HpdSample& sample, std::span<const double> weights,
                                  const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = sample.size();
  const std::vector<double> w = checked_weights(n, weights);

  HpdMatrix mu = sample[medoid_index(sample, w)];
  NormalFrame frame(mu);
  Logs logs = whitened_logs(frame, sample);

  auto objective = [&](const Logs& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * l.d[i] * l.d[i];
    return s;
  };
  auto gradient = [&](const Logs& l) {
    HermitianMatrix g = HermitianMatrix::zero(sample.dim());
    for (std::size_t i = 0; i < n; ++i)
      if (w[i] != 0.0) g += l.v[i] * w[i];
    return g;
  };

  double obj = objective(logs);
  HermitianMatrix g = gradient(logs);
  double residual = g.frobenius_norm();
  double t = cfg.step;
  for (int it = 0;; ++it) {
    if (residual <= cfg.tol * std::max(1.0, std::sqrt(obj))) return {mu, residual, it};
    if (it == cfg.max_iter)
      throw ConvergenceError("intrinsic mean did not converge in " + std::to_string(it) + " iterations",
                             mu, residual, it);

    struct Candidate {
      HpdMatrix point;
      NormalFrame frame;
      Logs logs;
      double obj;
      HermitianMatrix g;
      double residual;
    };
    std::optional<Candidate> best;  // smallest gradient among steps lost in rounding
    for (int h = 0;; ++h) {
      if (h == kMaxHalvings)
        throw ConvergenceError("intrinsic mean step size collapsed", mu, residual, it);
      HpdMatrix cand = frame.exp(g * t);
      NormalFrame cand_frame(cand);
      Logs cand_logs = whitened_logs(cand_frame, sample);
      const double cand_obj = objective(cand_logs);
      HermitianMatrix cand_g = gradient(cand_logs);
      const double cand_residual = cand_g.frobenius_norm();
      // Armijo condition on sum w_i d_i^2 (twice the Frechet function). When the
      // change is lost in rounding of the objective, the gradient has to contract.
      const double drop = obj - cand_obj;
      bool accept = false;
      if (std::abs(drop) > kObjectiveSlack * obj) {
        accept = drop >= 0.5 * t * residual * residual;
      } else if (cand_residual <= 0.7 * residual) {
        accept = true;
      } else if (cand_residual < residual && (!best || cand_residual < best->residual)) {
        best = Candidate{std::move(cand), std::move(cand_frame), std::move(cand_logs), cand_obj,
                         std::move(cand_g), cand_residual};
      }
      if (!accept && best && h >= kNoiseHalvings) {
        mu = std::move(best->point);
        frame = std::move(best->frame);
        logs = std::move(best->logs);
        obj = best->obj;
        g = std::move(best->g);
        residual = best->residual;
        break;
      }
      if (accept) {
        mu = std::move(cand);
        frame = std::move(cand_frame);
        logs = std::move(cand_logs);
        obj = cand_obj;
        g = std::move(cand_g);
        residual = cand_residual;
        break;
      }
      t *= 0.5;
    }
    t = std::min(cfg.step, 2.0 * t);
  }
}

HpdMatrix intrinsic_mean(const HpdSample& sample, std::span<const double> weights,
                         const SolverConfig& cfg) {
  return solve_intrinsic_mean(sample, weights, cfg).point;
}

CenterResult solve_intrinsic_median(const HpdSample& sample, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = sample.size();
  const double nd = static_cast<double>(n);

  HpdMatrix m = sample[medoid_index(sample)];
  NormalFrame frame(m);
  Logs logs = whitened_logs(frame, sample);

  auto objective = [&](const Logs& l) {
    double s = 0.0;
    for (double v : l.d) s += v;
    return s;
  };

  double obj = objective(logs);
  bool left_vertex = false;
  for (int it = 0;; ++it) {
    // Weiszfeld sums over observations that do not coincide with m.
    HermitianMatrix unit_sum = HermitianMatrix::zero(sample.dim());
    double inv_sum = 0.0;
    double multiplicity = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (logs.d[i] < kMedianCoincidence) {
        multiplicity += 1.0;
        continue;
      }
      unit_sum += logs.v[i] * (1.0 / logs.d[i]);
      inv_sum += 1.0 / logs.d[i];
    }
    const double s_norm = unit_sum.frobenius_norm();
    // At a data point, the subgradient condition is ||S|| <= multiplicity.
    const double residual = std::max(0.0, s_norm - multiplicity);
    if (inv_sum == 0.0 || residual <= cfg.tol * nd) {
      // ||S|| = multiplicity: the median set is not a single point (d = 1 with
      // even n). Step into it if the objective stays flat.
      if (multiplicity > 0.0 && !left_vertex && s_norm >= multiplicity - cfg.tol * nd) {
        left_vertex = true;
        HpdMatrix cand = frame.exp(unit_sum * (cfg.step / inv_sum));
        NormalFrame cand_frame(cand);
        Logs cand_logs = whitened_logs(cand_frame, sample);
        const double cand_obj = objective(cand_logs);
        if (cand_obj <= obj * (1.0 + kObjectiveSlack)) {
          m = std::move(cand);
          frame = std::move(cand_frame);
          logs = std::move(cand_logs);
          obj = cand_obj;
          continue;
        }
      }
      return {m, residual, it};
    }
    if (it == cfg.max_iter)
      throw ConvergenceError("intrinsic median did not converge in " + std::to_string(it) + " iterations",
                             m, residual, it);

    const HermitianMatrix v = unit_sum * (1.0 / inv_sum);
    double t = cfg.step;
    for (int h = 0;; ++h) {
      if (h == kMaxHalvings)
        throw ConvergenceError("intrinsic median step size collapsed", m, residual, it);
      HpdMatrix cand = frame.exp(v * t);
      NormalFrame cand_frame(cand);
      Logs cand_logs = whitened_logs(cand_frame, sample);
      const double cand_obj = objective(cand_logs);
      if (cand_obj <= obj * (1.0 + kObjectiveSlack)) {
        m = std::move(cand);
        frame = std::move(cand_frame);
        logs = std::move(cand_logs);
        obj = cand_obj;
        break;
      }
      t *= 0.5;
    }
  }
}

HpdMatrix intrinsic_median(const HpdSample& sample, const SolverConfig& cfg) {
  return solve_intrinsic_median(sample, cfg).point;
}

}  // namespace hpd
