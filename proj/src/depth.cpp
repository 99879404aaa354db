#include "hpd/depth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hpd/lp.hpp"
#include "hpd/manifold.hpp"
#include "hpd/parallel.hpp"

namespace hpd {

namespace {

void require_dim(const HpdSample& s, const HpdMatrix& y) {
  if (s.dim() != y.dim())
    throw DomainError("query has dimension " + std::to_string(y.dim()) + ", sample has " +
                      std::to_string(s.dim()));
}

void require_zonoid_size(std::size_t n, std::size_t d) {
  if (n <= d * d)
    throw DomainError("zonoid requires n > d^2 (n = " + std::to_string(n) + ", d^2 = " +
                      std::to_string(d * d) + ")");
}

void require_grid(const HpdCurveSample& c, const HpdCurve& y) {
  if (y.size() != c.grid_size())
    throw DomainError("query curve has " + std::to_string(y.size()) + " points, grid has " +
                      std::to_string(c.grid_size()));
}

double zonoid_in_frame(const HpdSample& s, const NormalFrame& f) {
  const std::size_t k = s.dim() * s.dim();
  std::vector<double> pts(s.size() * k);
  for (std::size_t i = 0; i < s.size(); ++i)
    to_coordinates(f.log(s[i]), std::span<double>(pts.data() + i * k, k));
  return zonoid_alpha(ZonoidLp(k, std::move(pts)));
}

double spatial_in_frame(const HpdSample& s, const NormalFrame& f) {
  HermitianMatrix acc = HermitianMatrix::zero(s.dim());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const HermitianMatrix l = f.log(s[i]);
    const double d = l.frobenius_norm();
    if (d < 1e-12) continue;
    acc += l * (1.0 / d);
  }
  return std::clamp(1.0 - acc.frobenius_norm() / static_cast<double>(s.size()), 0.0, 1.0);
}

double mean_distance(const HpdSample& s, const HpdMatrix& y) {
  const NormalFrame f(y);
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) total += f.distance(s[i]);
  return total / static_cast<double>(s.size());
}

bool is_integrated(DepthMethod m) { return m == DepthMethod::izonoid || m == DepthMethod::igdd; }

DepthMethod pointwise(DepthMethod m) {
  if (m == DepthMethod::izonoid) return DepthMethod::zonoid;
  if (m == DepthMethod::igdd) return DepthMethod::gdd;
  return m;
}

double log_norm(const HpdMatrix& x) { return x.log().frobenius_norm(); }

}  // namespace

std::string_view to_string(DepthMethod m) {
  switch (m) {
    case DepthMethod::zonoid: return "zonoid";
    case DepthMethod::gdd: return "gdd";
    case DepthMethod::spatial: return "spatial";
    case DepthMethod::izonoid: return "izonoid";
    case DepthMethod::igdd: return "igdd";
  }
  return "?";
}

std::string_view to_string(TiePolicy p) { return p == TiePolicy::shared ? "shared" : "frobenius"; }

DepthMethod parse_depth_method(std::string_view name) {
  for (auto m : {DepthMethod::zonoid, DepthMethod::gdd, DepthMethod::spatial, DepthMethod::izonoid,
                 DepthMethod::igdd})
    if (name == to_string(m)) return m;
  throw DomainError("unknown depth method '" + std::string(name) + "'");
}

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "shared") return TiePolicy::shared;
  if (name == "frobenius") return TiePolicy::frobenius;
  throw DomainError("unknown tie policy '" + std::string(name) + "'");
}

double zonoid_depth(const HpdSample& sample, const HpdMatrix& y) {
  require_dim(sample, y);
  require_zonoid_size(sample.size(), sample.dim());
  return zonoid_in_frame(sample, NormalFrame(y));
}

double gdd(const HpdSample& sample, const HpdMatrix& y) {
  require_dim(sample, y);
  return std::exp(-mean_distance(sample, y));
}

double spatial_depth(const HpdSample& sample, const HpdMatrix& y) {
  require_dim(sample, y);
  return spatial_in_frame(sample, NormalFrame(y));
}

double integrated_zonoid_depth(const HpdCurveSample& curves, const HpdCurve& y) {
  return depth(DepthMethod::izonoid, curves, y).value;
}

double integrated_gdd(const HpdCurveSample& curves, const HpdCurve& y) {
  return depth(DepthMethod::igdd, curves, y).value;
}

ScoredDepth depth(DepthMethod method, const HpdSample& sample, const HpdMatrix& y) {
  switch (pointwise(method)) {
    case DepthMethod::zonoid: {
      const double v = zonoid_depth(sample, y);
      return {v, v};
    }
    case DepthMethod::gdd: {
      require_dim(sample, y);
      const double m = mean_distance(sample, y);
      return {std::exp(-m), -m};
    }
    default: {
      const double v = spatial_depth(sample, y);
      return {v, v};
    }
  }
}

ScoredDepth depth(DepthMethod method, const HpdCurveSample& curves, const HpdCurve& y) {
  require_grid(curves, y);
  const std::size_t T = curves.grid_size();
  std::vector<double> per_t(T);
  const DepthMethod pm = pointwise(method);
  if (pm == DepthMethod::zonoid) require_zonoid_size(curves.size(), curves.dim());
  parallel_for(T, [&](std::size_t t) { per_t[t] = depth(pm, curves.slice(t), y[t]).score; });
  const double avg = trapezoid_average(curves.grid(), per_t);
  if (pm == DepthMethod::gdd) return {std::exp(avg), avg};
  return {avg, avg};
}

std::vector<ScoredDepth> sample_depths(DepthMethod method, const HpdSample& sample) {
  const std::size_t n = sample.size();
  std::vector<ScoredDepth> out(n);
  switch (pointwise(method)) {
    case DepthMethod::zonoid:
      require_zonoid_size(n, sample.dim());
      parallel_for(n, [&](std::size_t i) {
        const double v = zonoid_in_frame(sample, NormalFrame(sample[i]));
        out[i] = {v, v};
      });
      break;
    case DepthMethod::gdd: {
      const std::vector<double> sums = sample.distance_sums();
      for (std::size_t i = 0; i < n; ++i) {
        const double m = sums[i] / static_cast<double>(n);
        out[i] = {std::exp(-m), -m};
      }
      break;
    }
    default:
      parallel_for(n, [&](std::size_t i) {
        const double v = spatial_in_frame(sample, NormalFrame(sample[i]));
        out[i] = {v, v};
      });
  }
  return out;
}

std::vector<ScoredDepth> sample_depths(DepthMethod method, const HpdCurveSample& curves) {
  const std::size_t n = curves.size();
  const std::size_t T = curves.grid_size();
  const DepthMethod pm = pointwise(method);
  if (pm == DepthMethod::zonoid) require_zonoid_size(n, curves.dim());
  std::vector<std::vector<ScoredDepth>> slices(T);
  for (std::size_t t = 0; t < T; ++t) slices[t] = sample_depths(pm, curves.slice(t));
  std::vector<ScoredDepth> out(n);
  std::vector<double> per_t(T);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) per_t[t] = slices[t][i].score;
    const double avg = trapezoid_average(curves.grid(), per_t);
    out[i] = pm == DepthMethod::gdd ? ScoredDepth{std::exp(avg), avg} : ScoredDepth{avg, avg};
  }
  return out;
}

bool scores_tied(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<std::size_t> rank_scores(std::span<const double> scores, TiePolicy policy,
                                     std::span<const double> tie_keys, std::vector<std::size_t>* order_out,
                                     std::size_t* tied_groups) {
  const std::size_t n = scores.size();
  if (policy == TiePolicy::frobenius && tie_keys.size() != n)
    throw DomainError("tie keys do not match the number of scores");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<std::size_t> ranks(n);
  std::size_t groups = 0;
  for (std::size_t g = 0; g < n;) {
    std::size_t e = g + 1;
    while (e < n && scores_tied(scores[order[g]], scores[order[e]])) ++e;
    if (e - g > 1) {
      ++groups;
      if (policy == TiePolicy::frobenius)
        std::sort(order.begin() + g, order.begin() + e, [&](std::size_t a, std::size_t b) {
          if (tie_keys[a] != tie_keys[b]) return tie_keys[a] < tie_keys[b];
          return a < b;
        });
      else
        std::sort(order.begin() + g, order.begin() + e);
    }
    for (std::size_t q = g; q < e; ++q) ranks[order[q]] = policy == TiePolicy::shared ? g + 1 : q + 1;
    g = e;
  }
  if (order_out) *order_out = std::move(order);
  if (tied_groups) *tied_groups = groups;
  return ranks;
}

namespace {

DepthReport make_report(DepthMethod method, TiePolicy policy, const std::vector<ScoredDepth>& d,
                        std::span<const double> keys) {
  DepthReport r{method, policy, {}, {}, {}, {}, 0};
  r.values.reserve(d.size());
  r.scores.reserve(d.size());
  for (const auto& x : d) {
    r.values.push_back(x.value);
    r.scores.push_back(x.score);
  }
  r.ranks = rank_scores(r.scores, policy, keys, &r.order, &r.tied_groups);
  return r;
}

}  // namespace

DepthReport rank(const HpdSample& sample, DepthMethod method, TiePolicy policy) {
  const auto d = sample_depths(method, sample);
  std::vector<double> keys;
  if (policy == TiePolicy::frobenius) {
    keys.resize(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) keys[i] = log_norm(sample[i]);
  }
  return make_report(method, policy, d, keys);
}

DepthReport rank(const HpdCurveSample& curves, DepthMethod method, TiePolicy policy) {
  if (!is_integrated(method) && curves.grid_size() != 1)
    throw DomainError(std::string("method ") + std::string(to_string(method)) +
                      " needs a sample of matrices, not curves");
  const auto d = sample_depths(method, curves);
  std::vector<double> keys;
  if (policy == TiePolicy::frobenius) {
    keys.resize(curves.size());
    std::vector<double> norms(curves.grid_size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
      for (std::size_t t = 0; t < curves.grid_size(); ++t) norms[t] = log_norm(curves.curve(i)[t]);
      keys[i] = trapezoid_average(curves.grid(), norms);
    }
  }
  return make_report(method, policy, d, keys);
}

DepthRegion depth_region(std::span<const ScoredDepth> depths, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const std::size_t n = depths.size();
  if (n == 0) throw DomainError("depth region of an empty sample");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return depths[a].score > depths[b].score; });
  const double need = std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(need), 1, n);
  const ScoredDepth& cut = depths[order[k - 1]];

  DepthRegion r{alpha, cut.value, cut.score, {}};
  for (std::size_t i = 0; i < n; ++i)
    if (depths[i].score >= cut.score || scores_tied(depths[i].score, cut.score)) r.members.push_back(i);
  return r;
}

DepthRegion depth_region(const HpdSample& sample, DepthMethod method, double alpha) {
  const auto d = sample_depths(method, sample);
  return depth_region(d, alpha);
}

}  // namespace hpd
