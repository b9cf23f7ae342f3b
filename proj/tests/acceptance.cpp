// Acceptance suite: one pass/fail line per criterion, nonzero exit status if
// any fail. The heavy Monte Carlo criteria share their ensembles.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "predprey/predprey.hpp"

using namespace predprey;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

int worker_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(4u, hc == 0 ? 1u : hc));
}

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.m1 = cfg.m2 = cfg.m3 = FieldSpec::constant(1.0);
  cfg.b1 = cfg.b2 = cfg.c1 = FieldSpec::constant(1.0);
  cfg.d1 = cfg.d2 = 0.1;
  cfg.u0 = cfg.v0 = FieldSpec::constant(0.5);
  cfg.grid_size = 64;
  cfg.dt = 1e-3;
  cfg.record_stride = 100;
  return cfg;
}

ExperimentConfig extinction_config() {
  ExperimentConfig cfg = base_config();
  cfg.a1 = FieldSpec::constant(2.0);
  cfg.a2 = FieldSpec::constant(1.0);
  cfg.c2 = FieldSpec::constant(1.0);
  cfg.m2 = FieldSpec::constant(2.0);
  cfg.noise1 = NoiseFamilySpec::single(0.1);
  cfg.noise2 = NoiseFamilySpec::single(0.1);
  cfg.horizon = 50.0;
  cfg.trajectories = 200;
  cfg.seed = 12345;
  return cfg;
}

ExperimentConfig permanence_config() {
  ExperimentConfig cfg = base_config();
  cfg.a1 = FieldSpec::constant(4.0);
  cfg.a2 = FieldSpec::constant(0.1);
  cfg.c2 = FieldSpec::constant(4.0);
  cfg.noise1 = NoiseFamilySpec::single(0.05);
  cfg.noise2 = NoiseFamilySpec::single(0.05);
  cfg.horizon = 50.0;
  cfg.trajectories = 200;
  cfg.seed = 20250612;
  return cfg;
}

// Positivity bookkeeping shared by the Monte Carlo criteria.
struct PositivityAudit {
  double max_relative_clip = 0.0;
  double min_observable = 0.0;
  void absorb(const TrajectoryRecord& rec) {
    max_relative_clip = std::max(max_relative_clip, rec.relative_clipped_mass());
    for (const std::vector<double>* series :
         {&rec.int_u, &rec.int_v, &rec.int_u2, &rec.int_v2, &rec.int_inv_u,
          &rec.min_u, &rec.min_v})
      for (double x : *series) min_observable = std::min(min_observable, x);
  }
};

}  // namespace

int main() {
  std::vector<Criterion> results;
  const int threads = worker_threads();
  const Grid grid = build_grid(64);
  const CosineBasis basis(grid);

  // 1. Semigroup exactness on eigenmodes.
  {
    Timer timer;
    double worst = 0.0;
    for (int k : {0, 1, 2, 5, 20}) {
      ScalarField ek(grid.size);
      for (int j = 0; j < grid.size; ++j) ek[j] = basis.mode(k, j);
      for (double d : {0.1, 1.0}) {
        for (double t : {0.01, 1.0}) {
          const ScalarField got = basis.apply_semigroup(ek, d, t);
          const double expect = CosineBasis::decay(k, d, t);
          for (int j = 0; j < grid.size; ++j)
            worst = std::max(worst, std::fabs(got[j] - expect * ek[j]));
        }
      }
    }
    results.push_back({1, "semigroup exactness", worst < 1e-12,
                       fmt("max |err| = %.3e (tol %.0e)", worst, 1e-12),
                       timer.seconds()});
  }

  // 2. Mass conservation under the semigroup.
  {
    Timer timer;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      ScalarField f(grid.size);
      for (int j = 0; j < grid.size; ++j)
        f[j] = gaussian_draw(314159, trial, 0, j, 1);
      const double before = integrate(grid, f);
      const double after =
          integrate(grid, basis.apply_semigroup(f, 0.1 + 0.009 * trial, 0.31));
      worst = std::max(worst, std::fabs(after - before));
    }
    results.push_back({2, "semigroup mass conservation", worst < 1e-12,
                       fmt("max |mass drift| = %.3e (tol %.0e)", worst, 1e-12),
                       timer.seconds()});
  }

  // 3. Noise law: flat-mode variance and three-mode two-point covariance.
  {
    Timer timer;
    const int n = 100000;
    const double dt = 1e-2;
    bool pass = true;
    std::string detail;
    {
      const double expect = 0.25 * dt;
      NoiseStream stream{2718, 1, NoiseSpec{{0.25}, {}}};
      double acc = 0.0, acc2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = sample_increment(stream, basis, i, dt, 1)[0];
        acc += x;
        acc2 += x * x;
      }
      const double mean = acc / n;
      const double var = (acc2 - n * mean * mean) / (n - 1);
      const double se = expect * std::sqrt(2.0 / (n - 1));
      pass = pass && std::fabs(var - expect) < 4.0 * se;
      detail += fmt("var err %.2e (4se %.2e)", std::fabs(var - expect), 4.0 * se);
    }
    {
      const std::vector<double> lam = {0.2, 0.1, 0.05};
      NoiseStream stream{2718, 2, NoiseSpec{lam, {}}};
      const int ja = 10, jb = 50;
      double expect = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double ea = k == 0 ? 1.0
                                 : std::sqrt(2.0) * std::cos(k * std::numbers::pi *
                                                             grid.points[ja]);
        const double eb = k == 0 ? 1.0
                                 : std::sqrt(2.0) * std::cos(k * std::numbers::pi *
                                                             grid.points[jb]);
        expect += dt * lam[k] * ea * eb;
      }
      double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
      for (int i = 0; i < n; ++i) {
        const ScalarField w = sample_increment(stream, basis, i, dt, 1);
        sa += w[ja];
        sb += w[jb];
        sab += w[ja] * w[jb];
        saa += w[ja] * w[ja];
        sbb += w[jb] * w[jb];
      }
      const double cov = (sab - sa * sb / n) / (n - 1);
      const double var_a = (saa - sa * sa / n) / (n - 1);
      const double var_b = (sbb - sb * sb / n) / (n - 1);
      const double se =
          std::sqrt((var_a * var_b + expect * expect) / (n - 1));
      pass = pass && std::fabs(cov - expect) < 4.0 * se;
      detail += fmt(", cov err %.2e (4se %.2e)", std::fabs(cov - expect), 4.0 * se);
    }
    results.push_back({3, "noise law", pass, detail, timer.seconds()});
  }

  // 4. Oracle agreement of the zero-noise homogeneous run.
  {
    Timer timer;
    ExperimentConfig cfg = permanence_config();
    cfg.noise1 = NoiseFamilySpec::none();
    cfg.noise2 = NoiseFamilySpec::none();
    cfg.dt = 1e-4;
    cfg.horizon = 10.0;
    cfg.record_stride = 100;
    const TrajectoryRecord rec = run_single(cfg, 0);
    const std::vector<PointState> ode =
        integrate_ode({4.0, 1.0, 1.0, 0.1, 1.0, 4.0, 1.0, 1.0, 1.0}, {0.5, 0.5},
                      10.0, 1e-9, 1000);
    double worst = 0.0;
    for (std::size_t i = 0; i < ode.size(); ++i) {
      worst = std::max(worst, std::fabs(rec.int_u[i] - ode[i].u));
      worst = std::max(worst, std::fabs(rec.int_v[i] - ode[i].v));
    }
    results.push_back({4, "oracle agreement", worst < 1e-4,
                       fmt("sup |spde - ode| = %.4e (tol %.0e)", worst, 1e-4),
                       timer.seconds()});
  }

  PositivityAudit audit;

  // 6. Extinction regime: fitted decay of the predator mean.
  {
    Timer timer;
    const ExperimentConfig cfg = extinction_config();
    const EnsembleResult ens = run_ensemble(cfg, threads);
    for (const TrajectoryRecord& rec : ens.records) audit.absorb(rec);
    double slope = 1.0;
    std::string note;
    try {
      slope = fit_decay_rate(ens.stats, "intV", 20.0, 50.0);
      note = fmt("fitted rate %.3f (need <= %.2f)", slope, -0.25);
    } catch (const std::exception& e) {
      note = std::string("fit failed: ") + e.what();
    }
    const bool pass = slope < 0.0 && slope <= -0.25 &&
                      ens.report.verdict == Verdict::ExtinctV;
    results.push_back({6, "extinction decay", pass,
                       note + ", verdict " + to_string(ens.report.verdict),
                       timer.seconds()});
  }

  // 7. Permanence regime: recomputed thresholds and late-window floors.
  {
    Timer timer;
    const ExperimentConfig cfg = permanence_config();
    const Grid g = cfg.make_grid();
    const CoefficientSet co = cfg.make_coefficients(g);
    const NoiseSpec spec = cfg.make_noise_spec();
    const double h0 = compute_h0(co, spec);
    const double r0 = h0 > 0.0 ? compute_r0(g, co, spec, h0) : -1.0;
    bool pass = h0 > 0.0 && r0 > 0.0;
    std::string note = fmt("H0 %.4f, R0 %.4f", h0, r0);
    double delta_hat = 0.0;
    if (pass) {
      delta_hat = find_delta(g, co, spec, h0, r0).delta_hat;
      const EnsembleResult ens = run_ensemble(cfg, threads);
      for (const TrajectoryRecord& rec : ens.records) audit.absorb(rec);
      const double b1_l1 = lp_norm(g, co.b1, 1.0);
      double inv_avg = 0.0, int_u_max = 0.0, int_v2_max = 0.0;
      int count = 0;
      for (std::size_t i = 0; i < ens.stats.times.size(); ++i) {
        const double t = ens.stats.times[i];
        if (t < 25.0 || t > 50.0) continue;
        inv_avg += ens.stats.mean_int_inv_u[i];
        int_u_max = std::max(int_u_max, ens.stats.mean_int_u[i]);
        int_v2_max = std::max(int_v2_max, ens.stats.mean_int_v2[i]);
        ++count;
      }
      inv_avg /= count;
      const bool a = inv_avg <= 1.2 * b1_l1 / h0;
      const bool b = int_u_max >= 0.8 * h0 / b1_l1;
      const bool c = int_v2_max >= delta_hat;
      pass = a && b && c && ens.report.verdict == Verdict::PermanentUV;
      note += fmt(", avg intInvU %.4f (cap %.4f)", inv_avg, 1.2 * b1_l1 / h0);
      note += fmt(", max intU %.3f (floor %.3f)", int_u_max, 0.8 * h0 / b1_l1);
      note += fmt(", max intV2 %.3f (floor %.4f)", int_v2_max, delta_hat);
    }
    results.push_back({7, "permanence floors", pass, note, timer.seconds()});
  }

  // 8. Mean-square convergence of the noise truncation.
  {
    Timer timer;
    ExperimentConfig cfg = permanence_config();
    cfg.horizon = 5.0;
    cfg.record_stride = 100;
    const int n_traj = 100;
    double gap[3], se[3];
    const int levels[3] = {8, 16, 32};
    for (int li = 0; li < 3; ++li) {
      const int n_coarse = levels[li];
      cfg.noise1 = NoiseFamilySpec::geometric(0.25, 0.5, 2 * n_coarse);
      cfg.noise2 = NoiseFamilySpec::geometric(0.25, 0.5, 2 * n_coarse);
      const Grid g = cfg.make_grid();
      SolverContext ctx(cfg.make_coefficients(g), cfg.make_solver_config());
      const ScalarField u0 = cfg.u0.on(g);
      const ScalarField v0 = cfg.v0.on(g);
      std::vector<double> gaps(n_traj);
      std::vector<GalerkinPair> pairs(n_traj);
      detail::parallel_trajectories(n_traj, threads, [&](int i) {
        pairs[i] = simulate_galerkin_pair(ctx, u0, v0, i, cfg.seed, n_coarse);
        gaps[i] = pairs[i].end_gap_sq;
      });
      for (const GalerkinPair& p : pairs) {
        audit.absorb(p.fine);
        audit.absorb(p.coarse);
      }
      double acc = 0.0, acc2 = 0.0;
      for (double x : gaps) {
        acc += x;
        acc2 += x * x;
      }
      gap[li] = acc / n_traj;
      se[li] = std::sqrt((acc2 / n_traj - gap[li] * gap[li]) / (n_traj - 1));
    }
    const bool monotone = gap[1] < gap[0] + (se[0] + se[1]) &&
                          gap[2] < gap[1] + (se[1] + se[2]);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "E|Z_2N - Z_N|^2: %.3e -> %.3e -> %.3e at N = 8, 16, 32",
                  gap[0], gap[1], gap[2]);
    results.push_back({8, "noise-mode convergence", monotone, buf, timer.seconds()});
  }

  // 5. Positivity audit over every ensemble above.
  results.push_back(
      {5, "positivity accounting", audit.max_relative_clip < 1e-3 &&
                                        audit.min_observable >= 0.0,
       fmt("max relative clipped mass %.3e (tol %.0e)",
           audit.max_relative_clip, 1e-3) +
           fmt(", min observable %.3e", audit.min_observable, 0.0),
       0.0});

  // 9. Unreachable truncation radius is bit-identical to none.
  {
    Timer timer;
    ExperimentConfig cfg = permanence_config();
    cfg.horizon = 2.0;
    ExperimentConfig truncated = cfg;
    truncated.truncation_radius = 1e6;
    const TrajectoryRecord a = run_single(cfg, 0);
    const TrajectoryRecord b = run_single(truncated, 0);
    const bool identical =
        a.times == b.times && a.int_u == b.int_u && a.int_v == b.int_v &&
        a.int_u2 == b.int_u2 && a.int_v2 == b.int_v2 &&
        a.int_inv_u == b.int_inv_u && a.min_u == b.min_u && a.min_v == b.min_v &&
        a.final_state.u == b.final_state.u && a.final_state.v == b.final_state.v;
    results.push_back({9, "truncation equivalence", identical,
                       identical ? "records bit-identical" : "records diverged",
                       timer.seconds()});
  }

  // 10. Reproducibility of the ensemble CSV.
  {
    Timer timer;
    ExperimentConfig cfg = extinction_config();
    cfg.horizon = 1.0;
    cfg.trajectories = 8;
    cfg.record_stride = 10;
    const std::string once = ensemble_csv(cfg, run_ensemble(cfg, 1));
    const std::string twice = ensemble_csv(cfg, run_ensemble(cfg, 1));
    const std::string threaded = ensemble_csv(cfg, run_ensemble(cfg, threads));
    const bool identical = once == twice && once == threaded;
    results.push_back({10, "ensemble reproducibility", identical,
                       identical ? "CSV byte-identical across reruns and threads"
                                 : "CSV bytes differ",
                       timer.seconds()});
  }

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failures;
    std::printf("[%s] %2d %-28s %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.detail.c_str(), c.seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}
