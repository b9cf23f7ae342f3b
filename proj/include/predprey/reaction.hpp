#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "predprey/field.hpp"
#include "predprey/grid.hpp"

namespace predprey {

// Spatial coefficient fields of the model and the two diffusivities.
// Every coefficient must be strictly positive at every grid point; in
// particular m1 > 0 keeps the functional-response denominator away from zero
// for nonnegative states.
struct CoefficientSet {
  ScalarField a1, b1, c1;  // prey growth, self-competition, predation rate
  ScalarField a2, b2, c2;  // predator death, self-competition, conversion
  ScalarField m1, m2, m3;  // response saturation
  double d1 = 0.0, d2 = 0.0;

  void validate(const Grid& grid) const {
    auto check = [&](const ScalarField& f, const char* name) {
      if (static_cast<int>(f.size()) != grid.size)
        throw std::invalid_argument(std::string(name) +
                                    ": length does not match grid");
      for (std::size_t j = 0; j < f.size(); ++j)
        if (!(f[j] > 0.0))
          throw std::invalid_argument(std::string(name) +
                                      " must be positive everywhere (index " +
                                      std::to_string(j) + ")");
    };
    check(a1, "a1");
    check(b1, "b1");
    check(c1, "c1");
    check(a2, "a2");
    check(b2, "b2");
    check(c2, "c2");
    check(m1, "m1");
    check(m2, "m2");
    check(m3, "m3");
    if (!(d1 > 0.0)) throw std::invalid_argument("d1 must be positive");
    if (!(d2 > 0.0)) throw std::invalid_argument("d2 must be positive");
  }
};

struct RatePair {
  double prey = 0.0;
  double predator = 0.0;
};

// Beddington-DeAngelis reaction at one point:
//   F1 = u(a1 - b1 u) - c1 u v / (m1 + m2 u + m3 v)
//   F2 = v(-a2 - b2 v) + c2 u v / (m1 + m2 u + m3 v)
inline RatePair rates_at(double u, double v, double a1, double b1, double c1,
                         double a2, double b2, double c2, double m1, double m2,
                         double m3) {
  const double response = u * v / (m1 + m2 * u + m3 * v);
  return {u * (a1 - b1 * u) - c1 * response,
          v * (-a2 - b2 * v) + c2 * response};
}

// Radially truncated variant: outside the ball |(u,v)| <= r the reaction is
// evaluated at the rescaled point r (u,v)/|(u,v)|. Inside the ball the code
// path is identical to rates_at, so an unreachable radius is bit-for-bit
// equivalent to no truncation.
inline RatePair truncated_rates_at(double u, double v, double radius_sq,
                                   double a1, double b1, double c1, double a2,
                                   double b2, double c2, double m1, double m2,
                                   double m3) {
  const double norm_sq = u * u + v * v;
  if (norm_sq <= radius_sq)
    return rates_at(u, v, a1, b1, c1, a2, b2, c2, m1, m2, m3);
  const double scale = std::sqrt(radius_sq / norm_sq);
  return rates_at(scale * u, scale * v, a1, b1, c1, a2, b2, c2, m1, m2, m3);
}

namespace detail {
inline void require_nonnegative(const StatePair& state) {
  for (std::size_t j = 0; j < state.u.size(); ++j)
    if (!(state.u[j] >= 0.0))
      throw std::domain_error("negative prey density at index " +
                              std::to_string(j));
  for (std::size_t j = 0; j < state.v.size(); ++j)
    if (!(state.v[j] >= 0.0))
      throw std::domain_error("negative predator density at index " +
                              std::to_string(j));
}
}  // namespace detail

inline StatePair eval_reaction(const CoefficientSet& co, const StatePair& z) {
  detail::require_nonnegative(z);
  const std::size_t n = z.u.size();
  StatePair f{ScalarField(n), ScalarField(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const RatePair r = rates_at(z.u[j], z.v[j], co.a1[j], co.b1[j], co.c1[j],
                                co.a2[j], co.b2[j], co.c2[j], co.m1[j],
                                co.m2[j], co.m3[j]);
    f.u[j] = r.prey;
    f.v[j] = r.predator;
  }
  return f;
}

inline StatePair eval_truncated_reaction(double radius,
                                         const CoefficientSet& co,
                                         const StatePair& z) {
  if (!(radius > 0.0))
    throw std::domain_error("truncation radius must be positive");
  detail::require_nonnegative(z);
  const double radius_sq =
      std::isinf(radius) ? std::numeric_limits<double>::infinity()
                         : radius * radius;
  const std::size_t n = z.u.size();
  StatePair f{ScalarField(n), ScalarField(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const RatePair r = truncated_rates_at(
        z.u[j], z.v[j], radius_sq, co.a1[j], co.b1[j], co.c1[j], co.a2[j],
        co.b2[j], co.c2[j], co.m1[j], co.m2[j], co.m3[j]);
    f.u[j] = r.prey;
    f.v[j] = r.predator;
  }
  return f;
}

// Constant-coefficient sets broadcast a scalar to every grid point.
inline ScalarField constant_field(const Grid& grid, double value) {
  return ScalarField(grid.size, value);
}

}  // namespace predprey
