#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "predprey/field.hpp"
#include "predprey/grid.hpp"

namespace predprey {

// Neumann Laplacian on [0,1] realized in its cosine eigenbasis
//
//   e_0(x) = 1,   e_k(x) = sqrt(2) cos(k pi x),   A e_k = -(k pi)^2 e_k.
//
// On the midpoint collocation grid the modes 0..M-1 are exactly orthonormal
// under the quadrature weights, so transform round trips and semigroup
// application hold to round-off for any grid field. The diffusion semigroup
// e^{tA} multiplies mode k by exp(-d (k pi)^2 t): it is diagonal here, mass
// (mode 0) is conserved exactly, and higher modes contract.
class CosineBasis {
 public:
  explicit CosineBasis(Grid grid) : grid_(std::move(grid)) {
    const int m = grid_.size;
    modes_.resize(static_cast<std::size_t>(m) * m);
    const double root2 = std::sqrt(2.0);
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < m; ++j) {
        const double e =
            k == 0 ? 1.0 : root2 * std::cos(k * std::numbers::pi * grid_.points[j]);
        modes_[static_cast<std::size_t>(k) * m + j] = e;
      }
    }
  }

  const Grid& grid() const { return grid_; }
  int size() const { return grid_.size; }

  // e_k evaluated at grid point j.
  double mode(int k, int j) const {
    return modes_[static_cast<std::size_t>(k) * grid_.size + j];
  }
  const double* mode_row(int k) const {
    return modes_.data() + static_cast<std::size_t>(k) * grid_.size;
  }

  SpectralCoeffs to_spectral(const ScalarField& f) const {
    require_size(f.size());
    const int m = grid_.size;
    SpectralCoeffs c(m);
    for (int k = 0; k < m; ++k) {
      const double* row = mode_row(k);
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += row[j] * f[j];
      c[k] = acc / m;
    }
    return c;
  }

  ScalarField from_spectral(const SpectralCoeffs& c) const {
    require_size(c.size());
    const int m = grid_.size;
    ScalarField f(m);
    for (int k = 0; k < m; ++k) {
      const double ck = c[k];
      if (ck == 0.0) continue;
      const double* row = mode_row(k);
      for (int j = 0; j < m; ++j) f[j] += ck * row[j];
    }
    return f;
  }

  // Applies e^{t d Laplacian} with Neumann boundary conditions.
  ScalarField apply_semigroup(const ScalarField& f, double diffusivity,
                              double t) const {
    if (diffusivity < 0.0) throw std::domain_error("diffusivity must be >= 0");
    if (t < 0.0) throw std::domain_error("time must be >= 0");
    SpectralCoeffs c = to_spectral(f);
    const int m = grid_.size;
    for (int k = 0; k < m; ++k) c[k] *= decay(k, diffusivity, t);
    return from_spectral(c);
  }

  // Dense matrix of the one-step semigroup, row-major M x M. One matvec per
  // step is cheaper than transform-scale-transform in the solver loop.
  std::vector<double> semigroup_matrix(double diffusivity, double dt) const {
    if (diffusivity < 0.0) throw std::domain_error("diffusivity must be >= 0");
    if (dt < 0.0) throw std::domain_error("time must be >= 0");
    const int m = grid_.size;
    std::vector<double> op(static_cast<std::size_t>(m) * m, 0.0);
    for (int k = 0; k < m; ++k) {
      const double dk = decay(k, diffusivity, dt) / m;
      if (dk == 0.0) continue;
      const double* row = mode_row(k);
      for (int j = 0; j < m; ++j) {
        const double s = dk * row[j];
        double* out = op.data() + static_cast<std::size_t>(j) * m;
        for (int i = 0; i < m; ++i) out[i] += s * row[i];
      }
    }
    return op;
  }

  static double decay(int k, double diffusivity, double t) {
    const double rate = k * std::numbers::pi;
    return std::exp(-diffusivity * rate * rate * t);
  }

 private:
  void require_size(std::size_t n) const {
    if (static_cast<int>(n) != grid_.size)
      throw std::invalid_argument("field length does not match grid");
  }

  Grid grid_;
  std::vector<double> modes_;
};

inline void matvec(const std::vector<double>& op, const double* x, double* y,
                   int m) {
  for (int r = 0; r < m; ++r) {
    const double* row = op.data() + static_cast<std::size_t>(r) * m;
    double acc = 0.0;
    for (int c = 0; c < m; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

}  // namespace predprey
