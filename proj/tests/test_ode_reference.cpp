#include <cmath>

#include <doctest.h>

#include "predprey/ode_reference.hpp"

using namespace predprey;

TEST_CASE("predator-free trajectory matches the logistic closed form") {
  const PointCoefficients p{2.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const double u0 = 0.3;
  const std::vector<PointState> traj = integrate_ode(p, {u0, 0.0}, 5.0, 1e-10, 500);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = 5.0 * i / 500.0;
    const double exact =
        p.a1 * u0 / (p.b1 * u0 + (p.a1 - p.b1 * u0) * std::exp(-p.a1 * t));
    CHECK(std::fabs(traj[i].u - exact) < 1e-8);
    CHECK(traj[i].v == 0.0);
  }
}

TEST_CASE("logistic equilibrium is stationary") {
  const PointCoefficients p{2.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const std::vector<PointState> traj = integrate_ode(p, {4.0, 0.0}, 3.0, 1e-10, 100);
  for (const PointState& z : traj) {
    CHECK(std::fabs(z.u - 4.0) < 1e-9);
    CHECK(z.v == 0.0);
  }
}

TEST_CASE("prey-free predator collapses along the closed form") {
  const PointCoefficients p{1.0, 1.0, 1.0, 0.8, 0.5, 1.0, 1.0, 1.0, 1.0};
  const double v0 = 2.0;
  const std::vector<PointState> traj = integrate_ode(p, {0.0, v0}, 4.0, 1e-10, 400);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    // v' = -v(a2 + b2 v) solves to a2 v0 e^{-a2 t} / (a2 + b2 v0 (1 - e^{-a2 t})).
    const double t = 4.0 * i / 400.0;
    const double e = std::exp(-p.a2 * t);
    const double exact = p.a2 * v0 * e / (p.a2 + p.b2 * v0 * (1.0 - e));
    CHECK(traj[i].u == 0.0);
    CHECK(std::fabs(traj[i].v - exact) < 1e-8);
  }
  CHECK(traj.back().v < v0);
}

TEST_CASE("halving the tolerance changes the output by less than the old one") {
  const PointCoefficients p{4.0, 1.0, 1.0, 0.1, 1.0, 4.0, 1.0, 1.0, 1.0};
  const std::vector<PointState> coarse = integrate_ode(p, {0.5, 0.5}, 10.0, 1e-6, 200);
  const std::vector<PointState> fine = integrate_ode(p, {0.5, 0.5}, 10.0, 5e-7, 200);
  double diff = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    diff = std::max(diff, std::fabs(coarse[i].u - fine[i].u));
    diff = std::max(diff, std::fabs(coarse[i].v - fine[i].v));
  }
  CHECK(diff < 1e-6);
}

TEST_CASE("invalid oracle inputs are rejected") {
  const PointCoefficients p{1, 1, 1, 1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(integrate_ode(p, {-0.1, 0.0}, 1.0, 1e-8), std::domain_error);
  CHECK_THROWS_AS(integrate_ode(p, {0.1, 0.0}, -1.0, 1e-8), std::domain_error);
  CHECK_THROWS_AS(integrate_ode(p, {0.1, 0.0}, 1.0, 0.0), std::domain_error);
  const PointCoefficients bad{1, 1, 1, 1, 1, 1, 0, 1, 1};
  CHECK_THROWS_AS(integrate_ode(bad, {0.1, 0.0}, 1.0, 1e-8), std::domain_error);
}
