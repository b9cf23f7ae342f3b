#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace predprey {

// Values of a scalar density on the collocation grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  explicit ScalarField(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<double>& values() const { return v_; }

  bool operator==(const ScalarField&) const = default;

 private:
  std::vector<double> v_;
};

// Cosine-mode amplitudes; index k is the mode number.
class SpectralCoeffs {
 public:
  SpectralCoeffs() = default;
  explicit SpectralCoeffs(std::size_t n, double fill = 0.0) : c_(n, fill) {}
  explicit SpectralCoeffs(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  std::size_t size() const { return c_.size(); }
  double& operator[](std::size_t k) { return c_[k]; }
  double operator[](std::size_t k) const { return c_[k]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  bool operator==(const SpectralCoeffs&) const = default;

 private:
  std::vector<double> c_;
};

// Prey/predator density pair.
struct StatePair {
  ScalarField u;
  ScalarField v;
};

}  // namespace predprey
