#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "predprey/errors.hpp"
#include "predprey/noise.hpp"
#include "predprey/reaction.hpp"
#include "predprey/spectral.hpp"

namespace predprey {

enum class PositivityPolicy { Clip, Reject };

struct SolverConfig {
  double dt = 1e-3;
  double horizon = 50.0;
  int record_stride = 100;
  double truncation_radius = std::numeric_limits<double>::infinity();
  PositivityPolicy positivity = PositivityPolicy::Clip;
  double reject_tolerance = 1e-8;
  int grid_size = 64;
  NoiseSpec noise;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (dt > horizon) throw std::invalid_argument("dt must not exceed horizon");
    if (record_stride < 1)
      throw std::invalid_argument("record_stride must be positive");
    if (record_stride * dt > horizon + 1e-12)
      throw std::invalid_argument("record interval exceeds horizon");
    if (!(truncation_radius > 0.0))
      throw std::invalid_argument("truncation radius must be positive");
    if (grid_size < 2) throw std::invalid_argument("grid size must be at least 2");
    if (noise.modes() > grid_size)
      throw std::invalid_argument("noise modes exceed grid resolution");
    noise.validate();
  }
};

// Observable time series of one sample path. int_inv_u integrates 1/U over
// the set where U > 0; points with vanishing density contribute zero, so the
// absorbing state U == 0 reports zero rather than infinity.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> int_u, int_v;
  std::vector<double> int_u2, int_v2;
  std::vector<double> int_inv_u;
  std::vector<double> min_u, min_v;
  double clip_mass = 0.0;      // quadrature mass removed by clipping, all steps
  double mass_integral = 0.0;  // per-step sums of integral(U+V), the denominator
  StatePair final_state;

  double relative_clipped_mass() const {
    return mass_integral > 0.0 ? clip_mass / mass_integral : 0.0;
  }
};

// Everything shared by the trajectories of one run: basis, coefficients and
// the dense one-step diffusion operators. Read-only once built, so workers
// may share a single instance.
struct SolverContext {
  CosineBasis basis;
  CoefficientSet coeffs;
  SolverConfig config;
  std::vector<double> diffusion_u;
  std::vector<double> diffusion_v;

  SolverContext(const CoefficientSet& coefficients, const SolverConfig& cfg)
      : basis(build_grid(cfg.grid_size)),
        coeffs(coefficients),
        config(cfg),
        diffusion_u(),
        diffusion_v() {
    config.validate();
    coeffs.validate(basis.grid());
    diffusion_u = basis.semigroup_matrix(coeffs.d1, config.dt);
    diffusion_v = basis.semigroup_matrix(coeffs.d2, config.dt);
  }
};

// Positivity enforcement on a bare state. Clip zeroes negative entries and
// accounts the removed quadrature mass; Reject throws past the tolerance and
// zeroes round-off-level negatives within it.
inline std::pair<StatePair, double> apply_positivity(
    StatePair state, const Grid& grid, PositivityPolicy policy,
    double reject_tolerance = 1e-8, std::uint64_t step = 0) {
  double clipped = 0.0;
  auto sweep = [&](ScalarField& f) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double x = f[j];
      if (x < 0.0) {
        if (policy == PositivityPolicy::Reject && x < -reject_tolerance)
          throw PositivityError(step, j, x);
        clipped += -x * grid.weights[j];
        f[j] = 0.0;
      }
    }
  };
  sweep(state.u);
  sweep(state.v);
  return {std::move(state), clipped};
}

// Advances one trajectory by the exponential Euler-Maruyama scheme on the
// mild form: the drift and multiplicative noise update the state explicitly,
// then the analytic diffusion semigroup is applied,
//
//   U+ = e^{dt A1}[U + dt F1(U,V) + U dW1],
//   V+ = e^{dt A2}[V + dt F2(U,V) + V dW2],
//
// followed by the positivity policy. Holds per-trajectory scratch, so each
// worker needs its own instance.
class Stepper {
 public:
  Stepper(const SolverContext& ctx, NoiseStream stream)
      : ctx_(&ctx),
        stream_(std::move(stream)),
        radius_sq_(std::isinf(ctx.config.truncation_radius)
                       ? std::numeric_limits<double>::infinity()
                       : ctx.config.truncation_radius *
                             ctx.config.truncation_radius),
        has_noise_u_(trace(stream_.spec, 1) > 0.0),
        has_noise_v_(trace(stream_.spec, 2) > 0.0),
        bracket_u_(ctx.basis.size()),
        bracket_v_(ctx.basis.size()),
        dw_(ctx.basis.size()) {
    if (stream_.spec.modes() > ctx.basis.size())
      throw std::invalid_argument("noise modes exceed grid resolution");
  }

  const NoiseStream& stream() const { return stream_; }
  double clip_mass() const { return clip_mass_; }
  double mass_integral() const { return mass_integral_; }

  void advance(StatePair& z, std::uint64_t step) {
    const int m = ctx_->basis.size();
    const double dt = ctx_->config.dt;
    const CoefficientSet& co = ctx_->coeffs;

    for (int j = 0; j < m; ++j) {
      const RatePair r = truncated_rates_at(
          z.u[j], z.v[j], radius_sq_, co.a1[j], co.b1[j], co.c1[j], co.a2[j],
          co.b2[j], co.c2[j], co.m1[j], co.m2[j], co.m3[j]);
      bracket_u_[j] = z.u[j] + dt * r.prey;
      bracket_v_[j] = z.v[j] + dt * r.predator;
    }
    if (has_noise_u_) add_noise(z.u, 1, step, bracket_u_);
    if (has_noise_v_) add_noise(z.v, 2, step, bracket_v_);

    matvec(ctx_->diffusion_u, bracket_u_.data(), z.u.data(), m);
    matvec(ctx_->diffusion_v, bracket_v_.data(), z.v.data(), m);

    enforce_positivity(z, step);
  }

 private:
  void add_noise(const ScalarField& density, int species, std::uint64_t step,
                 std::vector<double>& bracket) {
    sample_mode_amplitudes(stream_, step, ctx_->config.dt, species, amps_);
    const int m = ctx_->basis.size();
    std::fill(dw_.begin(), dw_.end(), 0.0);
    for (std::size_t k = 0; k < amps_.size(); ++k) {
      const double a = amps_[k];
      if (a == 0.0) continue;
      const double* row = ctx_->basis.mode_row(static_cast<int>(k));
      for (int j = 0; j < m; ++j) dw_[j] += a * row[j];
    }
    for (int j = 0; j < m; ++j) bracket[j] += density[j] * dw_[j];
  }

  void enforce_positivity(StatePair& z, std::uint64_t step) {
    const Grid& grid = ctx_->basis.grid();
    const PositivityPolicy policy = ctx_->config.positivity;
    const double tol = ctx_->config.reject_tolerance;
    double clipped = 0.0;
    double total = 0.0;
    auto sweep = [&](ScalarField& f) {
      for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f[j];
        if (x < 0.0) {
          if (policy == PositivityPolicy::Reject && x < -tol)
            throw PositivityError(step, j, x);
          clipped += -x * grid.weights[j];
          f[j] = 0.0;
        } else {
          total += x * grid.weights[j];
        }
      }
    };
    sweep(z.u);
    sweep(z.v);
    if (!std::isfinite(total) || !std::isfinite(clipped)) throw BlowupError(step);
    clip_mass_ += clipped;
    mass_integral_ += total;
  }

  const SolverContext* ctx_;
  NoiseStream stream_;
  double radius_sq_;
  bool has_noise_u_, has_noise_v_;
  double clip_mass_ = 0.0;
  double mass_integral_ = 0.0;
  std::vector<double> bracket_u_, bracket_v_, dw_;
  std::vector<double> amps_;
};

// Single-step convenience with the contract of Stepper::advance; builds the
// context on every call, so use Stepper directly in loops.
inline StatePair step(const StatePair& state, const CoefficientSet& coeffs,
                      const NoiseStream& stream, std::uint64_t k,
                      const SolverConfig& cfg) {
  SolverContext ctx(coeffs, cfg);
  Stepper stepper(ctx, stream);
  StatePair z = state;
  stepper.advance(z, k);
  return z;
}

namespace detail {

inline void record_observables(const Grid& grid, const StatePair& z, double t,
                               TrajectoryRecord& rec) {
  double iu = 0.0, iv = 0.0, iu2 = 0.0, iv2 = 0.0, inv_u = 0.0;
  double mu = z.u[0], mv = z.v[0];
  for (std::size_t j = 0; j < z.u.size(); ++j) {
    const double w = grid.weights[j];
    const double u = z.u[j];
    const double v = z.v[j];
    iu += w * u;
    iv += w * v;
    iu2 += w * u * u;
    iv2 += w * v * v;
    if (u > 0.0) inv_u += w / u;
    if (u < mu) mu = u;
    if (v < mv) mv = v;
  }
  rec.times.push_back(t);
  rec.int_u.push_back(iu);
  rec.int_v.push_back(iv);
  rec.int_u2.push_back(iu2);
  rec.int_v2.push_back(iv2);
  rec.int_inv_u.push_back(inv_u);
  rec.min_u.push_back(mu);
  rec.min_v.push_back(mv);
}

inline void require_valid_initial(const ScalarField& f, int grid_size,
                                  const char* name) {
  if (static_cast<int>(f.size()) != grid_size)
    throw std::invalid_argument(std::string(name) +
                                ": length does not match grid");
  for (std::size_t j = 0; j < f.size(); ++j)
    if (!(f[j] >= 0.0) || !std::isfinite(f[j]))
      throw std::invalid_argument(std::string(name) +
                                  " must be nonnegative and bounded (index " +
                                  std::to_string(j) + ")");
}

inline TrajectoryRecord simulate_with_spec(const SolverContext& ctx,
                                           const NoiseSpec& spec,
                                           const ScalarField& u0,
                                           const ScalarField& v0,
                                           std::uint64_t trajectory_id,
                                           std::uint64_t master_seed) {
  require_valid_initial(u0, ctx.basis.size(), "u0");
  require_valid_initial(v0, ctx.basis.size(), "v0");
  Stepper stepper(ctx, NoiseStream{master_seed, trajectory_id, spec});
  StatePair z{u0, v0};
  TrajectoryRecord rec;
  const std::uint64_t n_steps =
      static_cast<std::uint64_t>(std::llround(ctx.config.horizon / ctx.config.dt));
  record_observables(ctx.basis.grid(), z, 0.0, rec);
  for (std::uint64_t k = 0; k < n_steps; ++k) {
    stepper.advance(z, k);
    if ((k + 1) % static_cast<std::uint64_t>(ctx.config.record_stride) == 0)
      record_observables(ctx.basis.grid(), z, (k + 1) * ctx.config.dt, rec);
  }
  rec.clip_mass = stepper.clip_mass();
  rec.mass_integral = stepper.mass_integral();
  rec.final_state = std::move(z);
  return rec;
}

}  // namespace detail

inline TrajectoryRecord simulate_trajectory(const SolverContext& ctx,
                                            const ScalarField& u0,
                                            const ScalarField& v0,
                                            std::uint64_t trajectory_id,
                                            std::uint64_t master_seed) {
  return detail::simulate_with_spec(ctx, ctx.config.noise, u0, v0,
                                    trajectory_id, master_seed);
}

inline TrajectoryRecord simulate_trajectory(const ScalarField& u0,
                                            const ScalarField& v0,
                                            const CoefficientSet& coeffs,
                                            const SolverConfig& cfg,
                                            std::uint64_t trajectory_id,
                                            std::uint64_t master_seed) {
  SolverContext ctx(coeffs, cfg);
  return simulate_trajectory(ctx, u0, v0, trajectory_id, master_seed);
}

struct GalerkinPair {
  TrajectoryRecord fine;
  TrajectoryRecord coarse;
  double end_gap_sq = 0.0;  // |Z_fine(T) - Z_coarse(T)|^2 in L2
};

// Two runs coupled through the shared mode-addressed draws: the coarse one
// keeps only the first n_coarse noise modes. Used to measure the mean-square
// gap between consecutive noise-truncation levels.
inline GalerkinPair simulate_galerkin_pair(const SolverContext& ctx,
                                           const ScalarField& u0,
                                           const ScalarField& v0,
                                           std::uint64_t trajectory_id,
                                           std::uint64_t master_seed,
                                           int n_coarse) {
  if (n_coarse < 0 || n_coarse > ctx.config.noise.modes())
    throw std::invalid_argument("coarse mode count out of range");
  GalerkinPair out;
  out.fine = detail::simulate_with_spec(ctx, ctx.config.noise, u0, v0,
                                        trajectory_id, master_seed);
  out.coarse =
      detail::simulate_with_spec(ctx, ctx.config.noise.truncated(n_coarse), u0,
                                 v0, trajectory_id, master_seed);
  const Grid& grid = ctx.basis.grid();
  double gap = 0.0;
  for (int j = 0; j < grid.size; ++j) {
    const double du = out.fine.final_state.u[j] - out.coarse.final_state.u[j];
    const double dv = out.fine.final_state.v[j] - out.coarse.final_state.v[j];
    gap += grid.weights[j] * (du * du + dv * dv);
  }
  out.end_gap_sq = gap;
  return out;
}

}  // namespace predprey
