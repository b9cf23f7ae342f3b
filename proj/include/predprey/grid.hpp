#pragma once

#include <stdexcept>
#include <vector>

#include "predprey/field.hpp"

namespace predprey {

// Collocation grid on the unit interval, normalized so the domain has
// measure one. Points are the cosine-transform abscissae; the weights are
// the unique positive quadrature exact on cosine modes 0..size-1.
struct Grid {
  int size = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

inline Grid build_grid(int m) {
  if (m < 2) throw std::invalid_argument("grid size must be at least 2");
  Grid g;
  g.size = m;
  g.points.resize(m);
  g.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    g.points[j] = (j + 0.5) / m;
    g.weights[j] = 1.0 / m;
  }
  return g;
}

inline double integrate(const Grid& grid, const ScalarField& f) {
  if (static_cast<int>(f.size()) != grid.size)
    throw std::invalid_argument("field length does not match grid");
  double acc = 0.0;
  for (int j = 0; j < grid.size; ++j) acc += grid.weights[j] * f[j];
  return acc;
}

template <class Fn>
ScalarField field_from(const Grid& grid, Fn&& fn) {
  ScalarField f(grid.size);
  for (int j = 0; j < grid.size; ++j) f[j] = fn(grid.points[j]);
  return f;
}

}  // namespace predprey
