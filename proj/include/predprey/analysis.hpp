#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "predprey/grid.hpp"
#include "predprey/noise.hpp"
#include "predprey/reaction.hpp"
#include "predprey/solver.hpp"

namespace predprey {

// Discrete realizations of the norms used by the threshold formulas:
// sup/inf over grid points and the quadrature p-norm for nonnegative fields.
inline double sup_norm(const ScalarField& f) {
  if (f.size() == 0) throw std::invalid_argument("empty field");
  return *std::max_element(f.begin(), f.end());
}

inline double inf_norm(const ScalarField& f) {
  if (f.size() == 0) throw std::invalid_argument("empty field");
  return *std::min_element(f.begin(), f.end());
}

inline double lp_norm(const Grid& grid, const ScalarField& f, double p) {
  if (p < 1.0) throw std::domain_error("p must be >= 1");
  if (static_cast<int>(f.size()) != grid.size)
    throw std::invalid_argument("field length does not match grid");
  double acc = 0.0;
  for (int j = 0; j < grid.size; ++j) {
    if (!(f[j] >= 0.0))
      throw std::domain_error("p-norm requires a nonnegative field");
    acc += grid.weights[j] * std::pow(f[j], p);
  }
  return std::pow(acc, 1.0 / p);
}

// inf over the grid of a2 - c2/m2; a positive value is the sufficient
// condition for predator extinction and bounds its exponential decay rate.
inline double extinction_margin(const CoefficientSet& co) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < co.a2.size(); ++j)
    m = std::min(m, co.a2[j] - co.c2[j] / co.m2[j]);
  return m;
}

// H0 = inf(a1 - c1/m3) - 3 trace(lambda1) C0^2 / 2, the prey growth floor
// after the noise penalty.
inline double compute_h0(const CoefficientSet& co, const NoiseSpec& spec) {
  double inf_term = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < co.a1.size(); ++j)
    inf_term = std::min(inf_term, co.a1[j] - co.c1[j] / co.m3[j]);
  const double c0 = basis_bound(spec);
  return inf_term - 1.5 * trace(spec, 1) * c0 * c0;
}

namespace detail {

struct R0Terms {
  double a2_l1;       // integral of a2
  double lambda2;     // predator noise trace
  double m2_over_c2;  // sup m2/c2
  double invasion_min;
};

inline R0Terms r0_terms(const Grid& grid, const CoefficientSet& co,
                        const NoiseSpec& spec, double h0) {
  const std::size_t n = co.a2.size();
  ScalarField m1_over_c2(n), m2_over_c2(n);
  for (std::size_t j = 0; j < n; ++j) {
    m1_over_c2[j] = co.m1[j] / co.c2[j];
    m2_over_c2[j] = co.m2[j] / co.c2[j];
  }
  const double b1_l1 = lp_norm(grid, co.b1, 1.0);
  const double b1_sup = sup_norm(co.b1);
  const double first = b1_l1 * sup_norm(m1_over_c2) / h0;
  const double second =
      std::sqrt(b1_l1 * b1_sup) * lp_norm(grid, m1_over_c2, 2.0) / h0;
  return {lp_norm(grid, co.a2, 1.0), trace(spec, 2), sup_norm(m2_over_c2),
          std::min(first, second)};
}

}  // namespace detail

// R0 = -|a2|_1 - lambda2/2 + 1 / (|m2/c2|^sup + min{ |b1|_1 |m1/c2|^sup / H0,
// sqrt(|b1|_1 |b1|^sup) |m1/c2|_2 / H0 }); positive together with H0 it is
// the sufficient condition for permanence.
inline double compute_r0(const Grid& grid, const CoefficientSet& co,
                         const NoiseSpec& spec, double h0) {
  if (!(h0 > 0.0)) throw std::domain_error("R0 requires H0 > 0");
  const detail::R0Terms t = detail::r0_terms(grid, co, spec, h0);
  return -t.a2_l1 - 0.5 * t.lambda2 + 1.0 / (t.m2_over_c2 + t.invasion_min);
}

struct DeltaPair {
  double delta = 0.0;
  double delta_hat = 0.0;
};

// Largest margin delta in (0, 10] that still certifies half of R0 after all
// slack terms, found by bisection on the strictly decreasing left-hand side;
// delta_hat is the resulting permanence floor for the predator mass.
inline DeltaPair find_delta(const Grid& grid, const CoefficientSet& co,
                            const NoiseSpec& spec, double h0, double r0) {
  if (!(h0 > 0.0)) throw std::domain_error("find_delta requires H0 > 0");
  if (!(r0 > 0.0)) throw std::domain_error("find_delta requires R0 > 0");
  const detail::R0Terms t = detail::r0_terms(grid, co, spec, h0);
  const auto lhs = [&](double delta) {
    return -t.a2_l1 - 0.5 * t.lambda2 - delta +
           1.0 / (t.m2_over_c2 + t.invasion_min + 2.0 * delta);
  };
  const double target = 0.5 * r0;
  double delta;
  if (lhs(10.0) >= target) {
    delta = 10.0;
  } else {
    double lo = 0.0, hi = 10.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (lhs(mid) >= target)
        lo = mid;
      else
        hi = mid;
    }
    delta = lo;
  }
  if (!(delta > 0.0) || lhs(delta) < target - 1e-9)
    throw std::runtime_error("no admissible delta despite R0 > 0");

  const std::size_t n = co.m3.size();
  ScalarField m3_over_c2(n);
  for (std::size_t j = 0; j < n; ++j) m3_over_c2[j] = co.m3[j] / co.c2[j];
  const double b2_l2 = lp_norm(grid, co.b2, 2.0);
  const double ratio = sup_norm(m3_over_c2) * sup_norm(co.b1);
  const double first = delta * delta / (4.0 * b2_l2 * b2_l2);
  const double second = h0 * h0 * delta * delta / (4.0 * ratio * ratio);
  return {delta, std::min(first, second)};
}

enum class Verdict { ExtinctV, PermanentUV, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ExtinctV: return "ExtinctV";
    case Verdict::PermanentUV: return "PermanentUV";
    default: return "Indeterminate";
  }
}

struct ThresholdReport {
  double extinction_margin = 0.0;
  double h0 = 0.0;
  double r0 = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double delta_hat = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::Indeterminate;
  std::string fired_condition = "none";
};

// Checks the two sufficient conditions in order; they are not exhaustive, so
// a parameter set firing neither is reported Indeterminate rather than
// extrapolated.
inline ThresholdReport classify(const Grid& grid, const CoefficientSet& co,
                                const NoiseSpec& spec) {
  ThresholdReport rep;
  rep.extinction_margin = extinction_margin(co);
  rep.h0 = compute_h0(co, spec);
  if (rep.h0 > 0.0) {
    rep.r0 = compute_r0(grid, co, spec, rep.h0);
    if (rep.r0 > 0.0) {
      try {
        const DeltaPair d = find_delta(grid, co, spec, rep.h0, rep.r0);
        rep.delta = d.delta;
        rep.delta_hat = d.delta_hat;
      } catch (const std::runtime_error&) {
        rep.verdict = Verdict::Indeterminate;
        rep.fired_condition = "none";
        return rep;
      }
    }
  }
  if (rep.extinction_margin > 0.0) {
    rep.verdict = Verdict::ExtinctV;
    rep.fired_condition = "inf(a2 - c2/m2) > 0";
  } else if (rep.h0 > 0.0 && rep.r0 > 0.0 && rep.delta_hat > 0.0) {
    rep.verdict = Verdict::PermanentUV;
    rep.fired_condition = "H0 > 0 and R0 > 0";
  }
  return rep;
}

// Ensemble means and standard errors of the recorded series, reduced in
// trajectory-index order.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_int_u, se_int_u;
  std::vector<double> mean_int_v, se_int_v;
  std::vector<double> mean_int_u2, se_int_u2;
  std::vector<double> mean_int_v2, se_int_v2;
  std::vector<double> mean_int_inv_u, se_int_inv_u;
  int n_traj = 0;

  const std::vector<double>* mean_series(const std::string& name) const {
    if (name == "intU") return &mean_int_u;
    if (name == "intV") return &mean_int_v;
    if (name == "intU2") return &mean_int_u2;
    if (name == "intV2") return &mean_int_v2;
    if (name == "intInvU") return &mean_int_inv_u;
    return nullptr;
  }
};

inline EnsembleStats ensemble_reduce(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to reduce");
  const std::size_t n_times = records[0].times.size();
  for (const TrajectoryRecord& r : records)
    if (r.times != records[0].times)
      throw std::invalid_argument("record time grids differ");

  EnsembleStats s;
  s.times = records[0].times;
  s.n_traj = static_cast<int>(records.size());
  const double n = static_cast<double>(records.size());

  auto reduce = [&](auto series_of, std::vector<double>& mean,
                    std::vector<double>& se) {
    mean.resize(n_times);
    se.resize(n_times);
    for (std::size_t i = 0; i < n_times; ++i) {
      double acc = 0.0;
      for (const TrajectoryRecord& r : records) acc += series_of(r)[i];
      const double mu = acc / n;
      double var = 0.0;
      if (records.size() > 1) {
        for (const TrajectoryRecord& r : records) {
          const double d = series_of(r)[i] - mu;
          var += d * d;
        }
        var /= (n - 1.0);
      }
      mean[i] = mu;
      se[i] = std::sqrt(var / n);
    }
  };
  reduce([](const TrajectoryRecord& r) -> const std::vector<double>& { return r.int_u; },
         s.mean_int_u, s.se_int_u);
  reduce([](const TrajectoryRecord& r) -> const std::vector<double>& { return r.int_v; },
         s.mean_int_v, s.se_int_v);
  reduce([](const TrajectoryRecord& r) -> const std::vector<double>& { return r.int_u2; },
         s.mean_int_u2, s.se_int_u2);
  reduce([](const TrajectoryRecord& r) -> const std::vector<double>& { return r.int_v2; },
         s.mean_int_v2, s.se_int_v2);
  reduce([](const TrajectoryRecord& r) -> const std::vector<double>& { return r.int_inv_u; },
         s.mean_int_inv_u, s.se_int_inv_u);
  return s;
}

// Least-squares slope of log(series) against time over [t_a, t_b].
inline double fit_decay_rate(const std::vector<double>& times,
                             const std::vector<double>& series, double t_a,
                             double t_b) {
  if (times.size() != series.size())
    throw std::invalid_argument("times and series lengths differ");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_a || t > t_b) continue;
    if (!(series[i] > 0.0))
      throw std::domain_error("nonpositive value in fit window at t = " +
                              std::to_string(t));
    const double y = std::log(series[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit window holds fewer than 2 points");
  const double denom = n * stt - st * st;
  return (n * sty - st * sy) / denom;
}

inline double fit_decay_rate(const EnsembleStats& stats,
                             const std::string& series, double t_a,
                             double t_b) {
  const std::vector<double>* s = stats.mean_series(series);
  if (s == nullptr) throw std::invalid_argument("unknown series: " + series);
  return fit_decay_rate(stats.times, *s, t_a, t_b);
}

}  // namespace predprey
