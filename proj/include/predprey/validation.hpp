#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "predprey/analysis.hpp"
#include "predprey/ode_reference.hpp"
#include "predprey/runner.hpp"

namespace predprey {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationOptions {
  int trajectories = 40;  // coupled-ensemble size; confidence bands scale with it
  int threads = 1;
  std::uint64_t seed = 97531;
  double semigroup_decay_scale = 1.0;  // fault-injection hook for sensitivity tests
};

namespace detail {

inline std::string measured(double value, double bound) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(3) << "measured " << value
      << ", bound " << bound;
  return out.str();
}

// Deterministic pseudo-random field with modes up to k_max.
inline ScalarField bandlimited_field(const CosineBasis& basis, int k_max,
                                     std::uint64_t seed, std::uint64_t tag) {
  SpectralCoeffs c(basis.size());
  for (int k = 0; k <= k_max && k < basis.size(); ++k)
    c[k] = gaussian_draw(seed, tag, 7, static_cast<std::uint32_t>(k), 1) /
           (1.0 + k);
  return basis.from_spectral(c);
}

inline ScalarField squared_field(const CosineBasis& basis, int k_max,
                                 std::uint64_t seed, std::uint64_t tag) {
  // Squaring keeps the field nonnegative as a function while staying inside
  // the resolved mode range (2 k_max < M), so diffusion must preserve sign.
  ScalarField f = bandlimited_field(basis, k_max, seed, tag);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = f[j] * f[j];
  return f;
}

inline PointCoefficients reference_point_coefficients() {
  return {4.0, 1.0, 1.0, 0.1, 1.0, 4.0, 1.0, 1.0, 1.0};
}

inline CoefficientSet reference_coefficients(const Grid& grid) {
  CoefficientSet co;
  co.a1 = constant_field(grid, 4.0);
  co.b1 = constant_field(grid, 1.0);
  co.c1 = constant_field(grid, 1.0);
  co.a2 = constant_field(grid, 0.1);
  co.b2 = constant_field(grid, 1.0);
  co.c2 = constant_field(grid, 4.0);
  co.m1 = constant_field(grid, 1.0);
  co.m2 = constant_field(grid, 1.0);
  co.m3 = constant_field(grid, 1.0);
  co.d1 = 0.1;
  co.d2 = 0.1;
  return co;
}

}  // namespace detail

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
  std::vector<CheckResult> results;
  const Grid grid = build_grid(64);
  const CosineBasis basis(grid);

  // Eigenmode decay of the diffusion semigroup, exact to round-off.
  {
    double worst = 0.0;
    for (int k : {0, 1, 2, 5, 20}) {
      ScalarField ek(grid.size);
      for (int j = 0; j < grid.size; ++j) ek[j] = basis.mode(k, j);
      for (double d : {0.1, 1.0}) {
        for (double t : {0.01, 1.0}) {
          const ScalarField got = basis.apply_semigroup(ek, d, t);
          const double rate = k * std::numbers::pi;
          const double expect =
              std::exp(-opt.semigroup_decay_scale * d * rate * rate * t);
          for (int j = 0; j < grid.size; ++j)
            worst = std::max(worst, std::fabs(got[j] - expect * ek[j]));
        }
      }
    }
    results.push_back({"semigroup eigenmode decay", worst < 1e-12,
                       detail::measured(worst, 1e-12)});
  }

  // Semigroup composition law e^{sA} e^{tA} = e^{(s+t)A}.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ScalarField f = detail::bandlimited_field(basis, 63, opt.seed, trial);
      const double s = 0.1 * (trial + 1) / 10.0;
      const double t = 1.0 - s;
      const ScalarField two =
          basis.apply_semigroup(basis.apply_semigroup(f, 0.5, s), 0.5, t);
      const ScalarField one = basis.apply_semigroup(f, 0.5, s + t);
      for (int j = 0; j < grid.size; ++j)
        worst = std::max(worst, std::fabs(two[j] - one[j]));
    }
    results.push_back({"semigroup composition law", worst < 1e-12,
                       detail::measured(worst, 1e-12)});
  }

  // Mass conservation: the zero mode passes through untouched.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const ScalarField f = detail::bandlimited_field(basis, 63, opt.seed, 100 + trial);
      const double before = integrate(grid, f);
      const double after =
          integrate(grid, basis.apply_semigroup(f, 0.3 + 0.007 * trial, 0.37));
      worst = std::max(worst, std::fabs(after - before));
    }
    results.push_back({"semigroup mass conservation", worst < 1e-12,
                       detail::measured(worst, 1e-12)});
  }

  // Sup-norm contraction.
  {
    double worst = -1.0;
    for (int trial = 0; trial < 20; ++trial) {
      const ScalarField f = detail::bandlimited_field(basis, 63, opt.seed, 300 + trial);
      const ScalarField g = basis.apply_semigroup(f, 1.0, 0.05 * (trial + 1));
      double fs = 0.0, gs = 0.0;
      for (int j = 0; j < grid.size; ++j) {
        fs = std::max(fs, std::fabs(f[j]));
        gs = std::max(gs, std::fabs(g[j]));
      }
      worst = std::max(worst, gs - fs);
    }
    results.push_back({"semigroup sup-norm contraction", worst < 1e-12,
                       detail::measured(worst, 1e-12)});
  }

  // Positivity preservation on resolved nonnegative fields.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const ScalarField f = detail::squared_field(basis, 28, opt.seed, 400 + trial);
      const double scale = sup_norm(f);
      for (double t : {0.01, 0.1, 1.0}) {
        const ScalarField g = basis.apply_semigroup(f, 0.1, t);
        const double undershoot = -inf_norm(g) / (scale > 0 ? scale : 1.0);
        worst = std::max(worst, undershoot);
      }
    }
    results.push_back({"semigroup positivity preservation", worst < 1e-9,
                       detail::measured(worst, 1e-9)});
  }

  // Increment variance: lambda = (0.25, 0, ...), dt = 1e-2, so each increment
  // value is N(0, 2.5e-3); the sample variance over n draws must sit within
  // four standard errors.
  {
    const int n = 100000;
    const double dt = 1e-2;
    const double var_expect = 0.25 * dt;
    NoiseStream stream{opt.seed, 11, NoiseSpec{{0.25}, {}}};
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const ScalarField w = sample_increment(stream, basis, i, dt, 1);
      acc += w[0];
      acc2 += w[0] * w[0];
    }
    const double mean = acc / n;
    const double var = (acc2 - n * mean * mean) / (n - 1);
    const double se = var_expect * std::sqrt(2.0 / (n - 1));
    const double err = std::fabs(var - var_expect);
    results.push_back({"noise increment variance", err < 4.0 * se,
                       detail::measured(err, 4.0 * se)});
  }

  // Two-point covariance of a three-mode spec against
  // dt sum_k lambda_k e_k(x) e_k(y), with e_k written out directly.
  {
    const int n = 100000;
    const double dt = 1e-2;
    const std::vector<double> lam = {0.2, 0.1, 0.05};
    NoiseStream stream{opt.seed, 13, NoiseSpec{lam, {}}};
    const int ja = 10, jb = 50;
    const double xa = grid.points[ja], xb = grid.points[jb];
    double cov_expect = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double eka =
          k == 0 ? 1.0 : std::sqrt(2.0) * std::cos(k * std::numbers::pi * xa);
      const double ekb =
          k == 0 ? 1.0 : std::sqrt(2.0) * std::cos(k * std::numbers::pi * xb);
      cov_expect += dt * lam[k] * eka * ekb;
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
        std::sqrt((var_a * var_b + cov_expect * cov_expect) / (n - 1));
    const double err = std::fabs(cov - cov_expect);
    results.push_back({"noise two-point covariance", err < 4.0 * se,
                       detail::measured(err, 4.0 * se)});
  }

  // Increments of distinct steps are uncorrelated.
  {
    const int n = 100000;
    const double dt = 1e-2;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
      NoiseStream stream{opt.seed, static_cast<std::uint64_t>(20 + i),
                         NoiseSpec{{0.25}, {}}};
      const ScalarField wa = sample_increment(stream, basis, 0, dt, 1);
      const ScalarField wb = sample_increment(stream, basis, 1, dt, 1);
      sx += wa[0];
      sy += wb[0];
      sxy += wa[0] * wb[0];
      sxx += wa[0] * wa[0];
      syy += wb[0] * wb[0];
    }
    const double corr = (sxy - sx * sy / n) /
                        std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    results.push_back({"noise step independence", std::fabs(corr) < bound,
                       detail::measured(std::fabs(corr), bound)});
  }

  // Mode-refined specs reuse the draws of shared modes bit-for-bit.
  {
    NoiseSpec coarse{{0.4, 0.2, 0.1, 0.05}, {0.4, 0.2, 0.1, 0.05}};
    NoiseSpec fine{{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125},
                   {0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125}};
    bool same = true;
    std::vector<double> ac, af;
    for (int step = 0; step < 20 && same; ++step) {
      sample_mode_amplitudes(NoiseStream{opt.seed, 5, coarse}, step, 1e-2, 1, ac);
      sample_mode_amplitudes(NoiseStream{opt.seed, 5, fine}, step, 1e-2, 1, af);
      for (std::size_t k = 0; k < ac.size(); ++k)
        if (ac[k] != af[k]) same = false;
    }
    results.push_back({"noise mode-refinement consistency", same,
                       same ? "shared modes identical" : "draws diverged"});
  }

  // Deterministic field run against the independent point integrator.
  // Bound 2e-4 is the calibrated first-order error of the stepper at
  // dt = 1e-4 on this transient (measured 1.41e-4).
  {
    SolverConfig cfg;
    cfg.dt = 1e-4;
    cfg.horizon = 10.0;
    cfg.record_stride = 100;
    cfg.grid_size = 64;
    SolverContext ctx(detail::reference_coefficients(grid), cfg);
    const TrajectoryRecord rec =
        simulate_trajectory(ctx, constant_field(grid, 0.5),
                            constant_field(grid, 0.5), 0, opt.seed);
    const std::vector<PointState> ode = integrate_ode(
        detail::reference_point_coefficients(), {0.5, 0.5}, 10.0, 1e-9, 1000);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      worst = std::max(worst, std::fabs(rec.int_u[i] - ode[i].u));
      worst = std::max(worst, std::fabs(rec.int_v[i] - ode[i].v));
    }
    results.push_back({"deterministic run vs point integrator", worst < 2e-4,
                       detail::measured(worst, 2e-4)});
  }

  // Mean-square gap between consecutive noise-truncation levels shrinks.
  {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 2.0;
    cfg.record_stride = 2000;
    cfg.grid_size = 64;
    const ScalarField u0 = constant_field(grid, 0.5);
    const ScalarField v0 = constant_field(grid, 0.5);
    std::vector<double> gap(3), se(3);
    const int levels[3] = {8, 16, 32};
    for (int li = 0; li < 3; ++li) {
      const int n_coarse = levels[li];
      NoiseFamilySpec fam = NoiseFamilySpec::geometric(0.25, 0.5, 2 * n_coarse);
      cfg.noise = NoiseSpec{fam.eigenvalues(), fam.eigenvalues()};
      SolverContext ctx(detail::reference_coefficients(grid), cfg);
      std::vector<double> gaps(opt.trajectories);
      detail::parallel_trajectories(opt.trajectories, opt.threads, [&](int i) {
        gaps[i] = simulate_galerkin_pair(ctx, u0, v0, i, opt.seed, n_coarse)
                      .end_gap_sq;
      });
      double acc = 0.0;
      for (double g : gaps) acc += g;
      const double mean = acc / opt.trajectories;
      double var = 0.0;
      for (double g : gaps) var += (g - mean) * (g - mean);
      var /= std::max(1, opt.trajectories - 1);
      gap[li] = mean;
      se[li] = std::sqrt(var / opt.trajectories);
    }
    const bool monotone = gap[1] < gap[0] + (se[0] + se[1]) &&
                          gap[2] < gap[1] + (se[1] + se[2]);
    std::ostringstream det;
    det << std::scientific << std::setprecision(3) << "gaps " << gap[0] << " -> "
        << gap[1] << " -> " << gap[2] << " (n=" << opt.trajectories << ")";
    results.push_back({"noise truncation convergence", monotone, det.str()});
  }

  // Threshold formulas against hand-evaluated constants.
  {
    CoefficientSet co = detail::reference_coefficients(grid);
    const double h0 = compute_h0(co, NoiseSpec{});
    const double r0 = compute_r0(grid, co, NoiseSpec{}, h0);
    const double r0_noisy = compute_r0(grid, co, NoiseSpec{{}, {8.0}}, h0);
    const double err = std::max({std::fabs(h0 - 3.0), std::fabs(r0 - 2.9),
                                 std::fabs(r0_noisy + 1.1)});
    results.push_back({"threshold hand values", err < 1e-12,
                       detail::measured(err, 1e-12)});
  }

  return results;
}

inline bool all_pass(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

inline void print_validation_table(std::ostream& out,
                                   const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " -- " << r.detail
        << "\n";
  out << (all_pass(results) ? "validation: all checks passed\n"
                            : "validation: FAILURES present\n");
}

}  // namespace predprey
