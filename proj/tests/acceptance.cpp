// Acceptance run: one PASS/FAIL line per criterion. Arguments select a subset
// of criteria by number; default is all of them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "hpd/centers.hpp"
#include "hpd/depth.hpp"
#include "hpd/experiments.hpp"
#include "hpd/manifold.hpp"
#include "hpd/report.hpp"
#include "support.hpp"

using namespace hpd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; keeps the first few messages.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  std::size_t failures() const { return failures_; }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << " (" << checks_ - failures_ << "/" << checks_ << " checks)";
    if (failures_) s << ": " << first_;
    return {failures_ == 0, s.str()};
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string first_;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

HermitianMatrix unit_direction(std::size_t d, std::mt19937_64& rng) { return random_unit_hermitian(d, rng); }

HermitianMatrix scaled(const HermitianMatrix& h, double t) {
  CMatrix m = h.matrix();
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) m(i, j) *= t;
  return HermitianMatrix(m);
}

HpdSample lognormal(std::size_t d, std::size_t n, std::uint64_t seed, double sigma = 0.7) {
  return sample_lognormal(HpdMatrix::identity(d), sigma, n, RngSeed{seed});
}

// ---- 1 --------------------------------------------------------------------
// Instances are Exp of Gaussian Hermitian matrices with coordinate scale
// `spread`. The absolute tolerances are attainable only while cond(p) * eps *
// dist stays well below them; spread 1 keeps cond(p) under about 1e5 for d <= 5.
Tally geometry_checks(double spread, std::uint64_t seed, double* worst_cond) {
  std::mt19937_64 rng(seed);
  Tally t;
  const std::size_t dims[] = {1, 2, 3, 5};
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t d = dims[rep % 4];
    const HpdMatrix x = random_hpd(d, rng, spread), y = random_hpd(d, rng, spread), z = random_hpd(d, rng, spread);
    const CMatrix a = random_invertible(d, rng);
    const double dxy = dist(x, y);
    *worst_cond = std::max({*worst_cond, x.condition_number(), y.condition_number(), z.condition_number()});
    t.check(dist(x, x) < 1e-10, "identity of indiscernibles");
    t.check(std::abs(dxy - dist(y, x)) < 1e-10, "symmetry");
    t.check(dist(x, z) <= dxy + dist(y, z) + 1e-9, "triangle inequality");
    t.check(std::abs(riemannian_norm(x, log_map(x, y)) - dxy) < 1e-10,
            "norm identity at cond " + fmt(x.condition_number(), 2));
    t.check(std::abs(dist(congruence(a, x), congruence(a, y)) - dxy) < 1e-9, "congruence isometry");
    const HermitianMatrix h = log_map(x, z);
    t.check(testing::max_diff(congruence(a, exp_map(x, h)), exp_map(congruence(a, x), congruence(a, h))) <
                1e-8 * std::max(1.0, congruence(a, z).matrix().frobenius_norm()),
            "exp equivariance");
  }
  return t;
}

Outcome geometry() {
  double cond = 0.0, wide_cond = 0.0;
  const Tally t = geometry_checks(1.0, 101, &cond);
  const Tally wide = geometry_checks(1.5, 101, &wide_cond);
  Outcome o = t.outcome("1000 random instances, d in {1,2,3,5}, max cond " + fmt(cond, 2));
  o.detail += " [spread 1.5, max cond " + fmt(wide_cond, 2) + ": " + wide.outcome("").detail + "]";
  return o;
}

// ---- 2 --------------------------------------------------------------------
Outcome zonoid_oracles() {
  std::mt19937_64 rng(202);
  std::normal_distribution<double> normal(0.0, 1.0);
  Tally t;
  double worst_1d = 0.0, worst_grid = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 2 + rep % 40;
    std::vector<double> logs(n), shifted;
    for (auto& l : logs) l = normal(rng);
    const double ly = 1.2 * normal(rng);
    for (double l : logs) shifted.push_back(l - ly);
    const double e = std::abs(zonoid_depth(testing::line_sample(logs), testing::scalar1(std::exp(ly))) -
                              testing::zonoid_1d_oracle(shifted));
    worst_1d = std::max(worst_1d, e);
    t.check(e < 1e-9, "1-D oracle gap " + fmt(e));
  }
  std::size_t compared = 0;
  for (int rep = 0; rep < 120; ++rep) {
    // d = 1 with n in {2,3,4} and d = 2 with n in {5,6}: n - d^2 - 1 <= 2 grid weights.
    const bool one = rep % 2 == 0;
    const std::size_t d = one ? 1 : 2;
    const std::size_t n = one ? 2 + rep / 2 % 3 : 5 + rep / 2 % 2;
    const HpdSample s = lognormal(d, n, 1000 + rep, 0.8);
    // Query near the sample center so most depths are positive.
    const HpdMatrix y = exp_map(intrinsic_mean(s), scaled(unit_direction(d, rng), 0.3 * std::abs(normal(rng))));
    const HermitianMatrix w = y.inv_sqrt();
    std::vector<std::vector<double>> cloud;
    for (std::size_t i = 0; i < n; ++i) {
      const HpdMatrix white = congruence(w.matrix(), s[i]);
      std::vector<double> c(d * d);
      to_coordinates(white.log(), c);
      cloud.push_back(c);
    }
    const double g = testing::zonoid_grid_oracle(cloud, 1e-3);
    const double z = zonoid_depth(s, y);
    if (g > 0.0) ++compared;
    worst_grid = std::max(worst_grid, std::abs(z - g));
    t.check(std::abs(z - g) < 2e-3, "grid oracle gap " + fmt(std::abs(z - g)));
  }
  t.check(compared >= 60, "too few positive-depth grid comparisons");
  return t.outcome("d=1 max gap " + fmt(worst_1d, 2) + " (tol 1e-9); n<=6 grid max gap " + fmt(worst_grid, 2) +
                   " (tol 2e-3), " + std::to_string(compared) + " positive");
}

// ---- 3 --------------------------------------------------------------------
Outcome maximality() {
  std::mt19937_64 rng(303);
  Tally t;
  double worst_zonoid = 0.0;
  const double steps[] = {1e-3, 1e-2, 0.05, 0.2, 0.5};
  for (int rep = 0; rep < 100; ++rep) {
    const HpdSample s = lognormal(2, 50, 3000 + rep);
    const double z = zonoid_depth(s, intrinsic_mean(s));
    worst_zonoid = std::max(worst_zonoid, std::abs(1.0 - z));
    t.check(std::abs(1.0 - z) < 1e-6, "zonoid at mean " + fmt(z, 12));

    const HpdMatrix med = intrinsic_median(s);
    const double g0 = gdd(s, med), s0 = spatial_depth(s, med);
    for (int k = 0; k < 100; ++k) {
      const HpdMatrix q = exp_map(med, scaled(unit_direction(2, rng), steps[k % 5]));
      t.check(gdd(s, q) <= g0 + 1e-12, "gdd exceeds the median value");
      t.check(spatial_depth(s, q) <= s0 + 1e-12, "spatial exceeds the median value");
    }
  }
  return t.outcome("100 samples n=50 d=2, max |1 - ZD(mean)| = " + fmt(worst_zonoid, 2) +
                   "; 100 perturbations per median for gdd and spatial");
}

// ---- 4 --------------------------------------------------------------------
Outcome properties() {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> dim_pick(1, 3);
  Tally p1, p2, p3, p4;

  // P.1 congruence invariance, all methods.
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = static_cast<std::size_t>(dim_pick(rng));
    const std::size_t n = d * d + 4 + rep % 8;
    const std::size_t T = 3;
    std::vector<HpdCurve> curves(n);
    const HpdSample base = lognormal(d, n * T, 4000 + rep);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < T; ++k) curves[i].push_back(base[i * T + k]);
    const HpdCurveSample cs({0.0, 0.4, 1.0}, curves);
    const HpdSample s = cs.slice(0);
    const CMatrix a = random_invertible(d, rng);
    const HpdMatrix y = exp_map(intrinsic_mean(s), scaled(unit_direction(d, rng), 0.5));
    const HpdSample as = s.congruence(a);
    const HpdMatrix ay = congruence(a, y);
    for (auto m : {DepthMethod::zonoid, DepthMethod::gdd, DepthMethod::spatial})
      p1.check(std::abs(depth(m, s, y).value - depth(m, as, ay).value) < 1e-7,
               std::string("P.1 ") + std::string(to_string(m)));
    std::vector<HpdCurve> acurves(n);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& x : curves[i]) acurves[i].push_back(congruence(a, x));
    const HpdCurveSample acs(std::vector<double>(cs.grid().begin(), cs.grid().end()), acurves);
    HpdCurve yc, ayc;
    for (std::size_t k = 0; k < T; ++k) {
      yc.push_back(curves[rep % n][k]);
      ayc.push_back(congruence(a, curves[rep % n][k]));
    }
    for (auto m : {DepthMethod::izonoid, DepthMethod::igdd})
      p1.check(std::abs(depth(m, cs, yc).value - depth(m, acs, ayc).value) < 1e-7,
               std::string("P.1 ") + std::string(to_string(m)));
  }

  // P.2 maximality: 20 directions x 5 steps around the median.
  const double steps[] = {1e-3, 1e-2, 0.05, 0.2, 1.0};
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rep % 3;
    const HpdSample s = lognormal(d, d * d + 6 + rep % 20, 5000 + rep);
    p2.check(std::abs(1.0 - zonoid_depth(s, intrinsic_mean(s))) < 1e-9, "P.2 zonoid at mean");
    const HpdMatrix med = intrinsic_median(s);
    const double g0 = gdd(s, med), s0 = spatial_depth(s, med);
    for (int k = 0; k < 20; ++k) {
      const HermitianMatrix h = unit_direction(d, rng);
      for (double st : steps) {
        const HpdMatrix q = exp_map(med, scaled(h, st));
        p2.check(gdd(s, q) <= g0 + 1e-12, "P.2 gdd");
        p2.check(spatial_depth(s, q) <= s0 + 1e-12, "P.2 spatial");
      }
    }
  }

  // P.3 monotonicity along geodesic rays from the deepest point.
  const double ts[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rep % 3;
    const HpdSample s = lognormal(d, d * d + 10 + rep % 20, 6000 + rep);
    const HpdMatrix mean = intrinsic_mean(s), med = intrinsic_median(s);
    for (int k = 0; k < 10; ++k) {
      const HermitianMatrix h = unit_direction(d, rng);
      double last_z = 2.0, last_g = 2.0;
      for (double tt : ts) {
        const double z = zonoid_depth(s, exp_map(mean, scaled(h, tt)));
        const double g = gdd(s, exp_map(med, scaled(h, tt)));
        p3.check(z <= last_z + 1e-9, "P.3 zonoid at t=" + fmt(tt));
        p3.check(g <= last_g + 1e-9, "P.3 gdd at t=" + fmt(tt));
        last_z = z;
        last_g = g;
      }
    }
  }

  // P.4 vanishing far out.
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rep % 3;
    const HpdSample s = lognormal(d, d * d + 10 + rep % 20, 7000 + rep);
    const HpdMatrix mean = intrinsic_mean(s);
    const HermitianMatrix h = unit_direction(d, rng);
    for (double far : {40.0, 60.0}) {
      const HpdMatrix y = exp_map(mean, scaled(h, far));
      p4.check(zonoid_depth(s, y) < 1e-3, "P.4 zonoid");
      p4.check(gdd(s, y) < 1e-3, "P.4 gdd");
    }
  }

  Outcome o{p1.failures() + p2.failures() + p3.failures() + p4.failures() == 0, ""};
  o.detail = "P.1 " + p1.outcome("").detail + " | P.2 " + p2.outcome("").detail + " | P.3 " +
             p3.outcome("").detail + " | P.4 " + p4.outcome("").detail;
  return o;
}

// ---- 5 --------------------------------------------------------------------
Outcome breakdown() {
  Outcome o;
  std::ostringstream detail;
  BreakdownParams gp;
  gp.n = 50;
  gp.m = 25;
  gp.contamination_norm = 1e4;
  gp.runs = 10;
  gp.methods = {DepthMethod::gdd};
  gp.seed = RngSeed{5};
  try {
    const auto r = breakdown_rank_experiment(gp);
    std::size_t last = 0;
    for (const auto& s : r.summary) last = std::max(last, s.contaminants_last);
    o.pass = o.pass && last == 10;
    detail << "gdd contaminants last " << last << "/10";
  } catch (const NumericalFailure& e) {
    o.pass = false;
    detail << "gdd at norm 1e4: " << e.what();
  }

  BreakdownParams zp = gp;
  zp.m = 2;
  zp.mode = ContaminationMode::adversarial;
  zp.methods = {DepthMethod::zonoid};
  zp.policies = {TiePolicy::frobenius};
  zp.breakdown_norm = 1e3;
  try {
    const auto r = breakdown_rank_experiment(zp);
    detail << "; zonoid rank-1 norm > 1e3 in " << r.summary.front().rank1_broken << "/10";
    o.pass = o.pass && r.summary.front().rank1_broken == 10;
  } catch (const NumericalFailure& e) {
    o.pass = false;
    detail << "; zonoid at norm 1e4: " << e.what();
  }

  // Same dichotomy at the largest representable norm, reported for context.
  gp.contamination_norm = zp.contamination_norm = 200.0;
  zp.breakdown_norm = 0.0;
  const auto g = breakdown_rank_experiment(gp);
  const auto z = breakdown_rank_experiment(zp);
  double rank1_min = 1e300;
  for (const auto& row : z.rows) rank1_min = std::min(rank1_min, row.rank1_norm);
  detail << " [at norm 200: gdd last " << g.summary.front().contaminants_last << "/10, zonoid rank-1 beyond clean max "
         << z.summary.front().rank1_broken << "/10, smallest rank-1 norm " << fmt(rank1_min) << "]";
  o.detail = detail.str();
  return o;
}

// ---- 6 --------------------------------------------------------------------
Outcome coverage() {
  struct Target {
    double p;
    double zonoid[3];
    double gdd[3];
  };
  const Target targets[] = {{5.0, {0.760, 0.889, 0.935}, {0.805, 0.901, 0.957}},
                            {2.0, {0.796, 0.897, 0.947}, {0.825, 0.898, 0.950}},
                            {1.5, {0.798, 0.892, 0.925}, {0.828, 0.914, 0.952}}};
  Tally t;
  std::ostringstream detail;
  for (const auto& tg : targets) {
    CoverageParams cp;
    cp.p = tg.p;
    cp.seed = RngSeed{static_cast<std::uint64_t>(60 + 10 * tg.p)};
    const auto rep = coverage_experiment(cp);
    detail << "p=" << tg.p << ":";
    for (const auto& row : rep.rows) {
      const std::size_t ai = row.alpha == 0.2 ? 0 : row.alpha == 0.1 ? 1 : 2;
      const double target = row.method == DepthMethod::zonoid ? tg.zonoid[ai] : tg.gdd[ai];
      const std::string tag = std::string(to_string(row.method)) + "@" + fmt(1 - row.alpha, 2);
      t.check(std::abs(row.coverage - target) <= 0.05,
              "p=" + fmt(tg.p) + " " + tag + " " + fmt(row.coverage, 3) + " vs " + fmt(target, 3));
      detail << " " << tag << "=" << fmt(row.coverage, 3) << "(" << fmt(target, 3) << ")";
    }
    detail << "; ";
  }
  return t.outcome(detail.str() + "tolerance 0.05, n=100, B=500, 200 simulations");
}

// ---- 7 --------------------------------------------------------------------
Outcome efficiency() {
  EfficiencyParams ep;
  ep.p = 5.0;
  ep.replications = 500;
  ep.seed = RngSeed{7};
  const auto r5 = efficiency_experiment(ep);
  ep.p = 1.5;
  const auto r15 = efficiency_experiment(ep);
  Outcome o{r5.re > 1.0 && r15.re < r5.re, ""};
  o.detail = "RE(p=5) = " + fmt(r5.re) + " (se " + fmt(r5.se, 2) + "), RE(p=1.5) = " + fmt(r15.re) + " (se " +
             fmt(r15.se, 2) + "), d=2, n=50, 500 replications";
  return o;
}

// ---- 8 --------------------------------------------------------------------
Outcome integrated() {
  std::mt19937_64 rng(808);
  Tally t;
  const std::size_t n = 40, T = 8;
  std::vector<double> grid;
  for (std::size_t k = 0; k < T; ++k) grid.push_back(static_cast<double>(k) / (T - 1));
  for (int rep = 0; rep < 3; ++rep) {
    // Curves around a moving center: mu(t) = Exp(t h0).
    const HermitianMatrix h0 = unit_direction(2, rng);
    std::vector<HpdCurve> curves(n);
    for (std::size_t k = 0; k < T; ++k) {
      const HpdMatrix mu = exp_map(HpdMatrix::identity(2), scaled(h0, grid[k]));
      const HpdSample sk = sample_lognormal(mu, 0.5, n, derive_seed(RngSeed{8000u + rep}, k));
      for (std::size_t i = 0; i < n; ++i) curves[i].push_back(sk[i]);
    }
    const HpdCurveSample cs(grid, curves);

    // T = 1 reduction, exact.
    for (std::size_t i = 0; i < 5; ++i) {
      std::vector<HpdCurve> single(n);
      for (std::size_t j = 0; j < n; ++j) single[j] = {curves[j][i]};
      const HpdCurveSample one({grid[i]}, single);
      const HpdMatrix y = curves[i][i];
      t.check(integrated_zonoid_depth(one, {y}) == zonoid_depth(one.slice(0), y), "izonoid T=1");
      t.check(integrated_gdd(one, {y}) == gdd(one.slice(0), y), "igdd T=1");
    }

    HpdCurve mean_curve, median_curve;
    for (std::size_t k = 0; k < T; ++k) {
      mean_curve.push_back(intrinsic_mean(cs.slice(k)));
      median_curve.push_back(intrinsic_median(cs.slice(k)));
    }
    const double z0 = integrated_zonoid_depth(cs, mean_curve);
    const double g0 = integrated_gdd(cs, median_curve);
    t.check(std::abs(1.0 - z0) < 1e-6, "izonoid at the mean curve " + fmt(z0, 10));
    for (int k = 0; k < 50; ++k) {
      const double step = k % 2 ? 0.02 : 0.3;
      HpdCurve zc, gc;
      for (std::size_t j = 0; j < T; ++j) {
        const HermitianMatrix h = scaled(unit_direction(2, rng), step);
        zc.push_back(exp_map(mean_curve[j], h));
        gc.push_back(exp_map(median_curve[j], h));
      }
      t.check(integrated_zonoid_depth(cs, zc) <= z0 + 1e-9, "izonoid perturbation above the mean curve");
      t.check(integrated_gdd(cs, gc) <= g0 + 1e-12, "igdd perturbation above the median curve");
    }
  }
  return t.outcome("n=40, T=8, d=2, 3 curve samples x 50 perturbation curves");
}

// ---- 9 --------------------------------------------------------------------
Outcome reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("hpd_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string sample = (dir / "sample.json").string();
  write_text_file(sample, dump(sample_to_json(sample_pgnd(HpdMatrix::identity(2), 2.0, 40, RngSeed{9}))));
  const std::string query = (dir / "query.json").string();
  write_text_file(query, dump(matrix_to_json(HpdMatrix::identity(2))));

  const std::vector<std::pair<std::string, Json>> jobs{
      {"depth", {{"input", sample}, {"method", "zonoid"}}},
      {"depth", {{"input", sample}, {"method", "spatial"}, {"ties", "frobenius"}}},
      {"depth", {{"input", sample}, {"method", "gdd"}, {"query", query}}},
      {"center", {{"input", sample}, {"type", "median"}}},
      {"cr", {{"input", sample}, {"method", "gdd"}, {"B", 100}, {"seed", 11}, {"test", query}}},
      {"cr", {{"input", sample}, {"method", "zonoid"}, {"B", 100}, {"seed", 12}}},
      {"simulate", {{"experiment", "breakdown"}, {"runs", 3}, {"direction", "random"}, {"contamination_norm", 100.0}}},
      {"simulate", {{"experiment", "efficiency"}, {"replications", 40}, {"seed", 3}}},
      {"simulate", {{"experiment", "coverage"}, {"n", 30}, {"B", 60}, {"simulations", 4}, {"seed", 4}}},
      {"simulate", {{"experiment", "timing"}, {"n_list", {10, 20}}, {"d_list", {2}}}},
  };
  Tally t;
  for (const auto& [command, p] : jobs) {
    Json params = p;
    const Json report = make_report(command, params, run_command(command, params));
    // Through a file, as a user would keep it.
    const std::string path = (dir / "report.json").string();
    write_text_file(path, dump(report));
    const auto diffs = replay_report(parse_json(read_text_file(path)));
    t.check(diffs.empty(), command + " replay differs at " + (diffs.empty() ? "" : diffs.front()));
  }
  fs::remove_all(dir);
  return t.outcome("depth, center, cr and all four simulations replayed from their reports");
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "geometry suite", 10, geometry},
      {2, "zonoid oracle equivalence", 30, zonoid_oracles},
      {3, "maximality", 60, maximality},
      {4, "depth property suites P.1-P.4", 1e300, properties},
      {5, "breakdown dichotomy", 120, breakdown},
      {6, "coverage at desk scale", 1800, coverage},
      {7, "relative efficiency direction", 600, efficiency},
      {8, "integrated depths", 120, integrated},
      {9, "reproducibility", 1e300, reproducibility},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
         << fmt(secs, 3) << " s";
    if (c.limit_s < 1e300) line << ", limit " << c.limit_s << " s";
    if (!in_time) line << ", too slow";
    line << "]";
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
