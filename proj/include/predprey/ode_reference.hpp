#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace predprey {

// Spatially homogeneous deterministic system, used as an independent check
// on the field solver. Deliberately shares no stepping code with it.
struct PointState {
  double u = 0.0;
  double v = 0.0;
};

struct PointCoefficients {
  double a1, b1, c1;
  double a2, b2, c2;
  double m1, m2, m3;
};

namespace detail {

inline PointState ode_rhs(const PointCoefficients& p, const PointState& z) {
  const double den = p.m1 + p.m2 * z.u + p.m3 * z.v;
  return {z.u * (p.a1 - p.b1 * z.u) - p.c1 * z.u * z.v / den,
          z.v * (-p.a2 - p.b2 * z.v) + p.c2 * z.u * z.v / den};
}

inline void rk4_step(const PointCoefficients& p, PointState& z, double h) {
  const PointState k1 = ode_rhs(p, z);
  const PointState k2 = ode_rhs(p, {z.u + 0.5 * h * k1.u, z.v + 0.5 * h * k1.v});
  const PointState k3 = ode_rhs(p, {z.u + 0.5 * h * k2.u, z.v + 0.5 * h * k2.v});
  const PointState k4 = ode_rhs(p, {z.u + h * k3.u, z.v + h * k3.v});
  z.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  z.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
}

inline std::vector<PointState> rk4_trajectory(const PointCoefficients& p,
                                              PointState init, double horizon,
                                              int n_out, int substeps) {
  std::vector<PointState> out;
  out.reserve(n_out + 1);
  out.push_back(init);
  PointState z = init;
  const double h = horizon / n_out / substeps;
  for (int i = 0; i < n_out; ++i) {
    for (int s = 0; s < substeps; ++s) rk4_step(p, z, h);
    out.push_back(z);
  }
  return out;
}

}  // namespace detail

// Classical RK4 with whole-trajectory step halving; returns states at the
// n_out+1 equispaced output times 0, T/n_out, ..., T once two consecutive
// refinements agree within tol in the sup norm.
inline std::vector<PointState> integrate_ode(const PointCoefficients& p,
                                             PointState init, double horizon,
                                             double tol, int n_out = 1000) {
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  if (n_out < 1) throw std::domain_error("need at least one output interval");
  if (!(init.u >= 0.0) || !(init.v >= 0.0))
    throw std::domain_error("initial state must be nonnegative");
  for (double c : {p.a1, p.b1, p.c1, p.a2, p.b2, p.c2, p.m1, p.m2, p.m3})
    if (!(c > 0.0)) throw std::domain_error("coefficients must be positive");

  std::vector<PointState> prev =
      detail::rk4_trajectory(p, init, horizon, n_out, 1);
  int substeps = 2;
  for (int halving = 0; halving < 20; ++halving, substeps *= 2) {
    std::vector<PointState> next =
        detail::rk4_trajectory(p, init, horizon, n_out, substeps);
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      diff = std::max(diff, std::fabs(next[i].u - prev[i].u));
      diff = std::max(diff, std::fabs(next[i].v - prev[i].v));
    }
    if (diff < tol) return next;
    prev = std::move(next);
  }
  throw std::runtime_error("ode reference failed to converge in 20 halvings");
}

}  // namespace predprey
