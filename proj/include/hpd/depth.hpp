#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hpd/sample.hpp"

namespace hpd {

enum class DepthMethod { zonoid, gdd, spatial, izonoid, igdd };
enum class TiePolicy { shared, frobenius };

std::string_view to_string(DepthMethod m);
std::string_view to_string(TiePolicy p);
/// Throws DomainError on an unknown name.
DepthMethod parse_depth_method(std::string_view name);
TiePolicy parse_tie_policy(std::string_view name);

/// Pointwise depth functions with respect to the empirical distribution of the sample.
double zonoid_depth(const HpdSample& sample, const HpdMatrix& y);
double gdd(const HpdSample& sample, const HpdMatrix& y);
double spatial_depth(const HpdSample& sample, const HpdMatrix& y);

/// Integrated depths of a curve y defined on the grid of the curve sample.
double integrated_zonoid_depth(const HpdCurveSample& curves, const HpdCurve& y);
double integrated_gdd(const HpdCurveSample& curves, const HpdCurve& y);

/// Depth together with its ranking score. Scores order like values but stay
/// finite where a value underflows: -mean distance for gdd, the value itself
/// for the other methods.
struct ScoredDepth {
  double value;
  double score;
};

/// izonoid and igdd applied to a plain sample act as their T = 1 reduction.
ScoredDepth depth(DepthMethod method, const HpdSample& sample, const HpdMatrix& y);
ScoredDepth depth(DepthMethod method, const HpdCurveSample& curves, const HpdCurve& y);

/// In-sample depths (each observation against the full sample, itself included).
std::vector<ScoredDepth> sample_depths(DepthMethod method, const HpdSample& sample);
std::vector<ScoredDepth> sample_depths(DepthMethod method, const HpdCurveSample& curves);

/// Scores closer than this (relative) are treated as tied.
inline constexpr double kTieTolerance = 1e-12;
bool scores_tied(double a, double b);

struct DepthReport {
  DepthMethod method;
  TiePolicy tie_policy;
  std::vector<double> values;
  std::vector<double> scores;
  std::vector<std::size_t> ranks;  // 1 = deepest
  std::vector<std::size_t> order;  // observation indices, deepest first
  std::size_t tied_groups = 0;     // groups of two or more tied observations
};

/// Center-outward ranking. Shared policy: tied observations get the same
/// (competition) rank. Frobenius policy: ties are broken by ascending ||Log x||_F
/// (grid-averaged for curves), then by index.
DepthReport rank(const HpdSample& sample, DepthMethod method, TiePolicy policy = TiePolicy::shared);
DepthReport rank(const HpdCurveSample& curves, DepthMethod method,
                 TiePolicy policy = TiePolicy::shared);

/// Ranks from precomputed scores; tie_keys orders tied observations under
/// the Frobenius policy (ignored for the shared policy).
std::vector<std::size_t> rank_scores(std::span<const double> scores, TiePolicy policy,
                                     std::span<const double> tie_keys, std::vector<std::size_t>* order = nullptr,
                                     std::size_t* tied_groups = nullptr);

struct DepthRegion {
  double alpha;
  double beta_star;
  double beta_score;
  std::vector<std::size_t> members;  // ascending indices
};

/// Central region holding the deepest ceil((1 - alpha) n) observations; the
/// cutoff is the smallest realized depth that keeps that many.
DepthRegion depth_region(std::span<const ScoredDepth> depths, double alpha);
DepthRegion depth_region(const HpdSample& sample, DepthMethod method, double alpha);

}  // namespace hpd
