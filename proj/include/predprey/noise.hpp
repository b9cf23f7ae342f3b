#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "predprey/spectral.hpp"

namespace predprey {

// Eigenvalues of the two driving Q-Wiener processes over the cosine basis.
// Finite mode counts make the traces automatically finite; generators of
// eigenvalue families must still produce summable tails when refined.
struct NoiseSpec {
  std::vector<double> lambda1;  // prey eigenvalues, mode k
  std::vector<double> lambda2;  // predator eigenvalues, mode k

  int modes() const {
    return static_cast<int>(std::max(lambda1.size(), lambda2.size()));
  }

  const std::vector<double>& eigenvalues(int species) const {
    if (species == 1) return lambda1;
    if (species == 2) return lambda2;
    throw std::invalid_argument("species must be 1 or 2");
  }

  void validate() const {
    for (double l : lambda1)
      if (!(l >= 0.0)) throw std::invalid_argument("noise eigenvalues must be >= 0");
    for (double l : lambda2)
      if (!(l >= 0.0)) throw std::invalid_argument("noise eigenvalues must be >= 0");
  }

  // First n modes of both species; draws on shared modes are unchanged.
  NoiseSpec truncated(int n) const {
    if (n < 0) throw std::invalid_argument("mode count must be >= 0");
    NoiseSpec out;
    out.lambda1.assign(lambda1.begin(),
                       lambda1.begin() + std::min<std::size_t>(n, lambda1.size()));
    out.lambda2.assign(lambda2.begin(),
                       lambda2.begin() + std::min<std::size_t>(n, lambda2.size()));
    return out;
  }

  bool operator==(const NoiseSpec&) const = default;
};

inline double trace(const NoiseSpec& spec, int species) {
  double acc = 0.0;
  for (double l : spec.eigenvalues(species)) acc += l;
  return acc;
}

// Sup bound of the active basis functions: 1 if only the constant mode
// carries noise, sqrt(2) if any oscillatory mode does, 1 by convention for
// an all-zero spec.
inline double basis_bound(const NoiseSpec& spec) {
  bool higher = false;
  bool any = false;
  auto scan = [&](const std::vector<double>& lam) {
    for (std::size_t k = 0; k < lam.size(); ++k) {
      if (lam[k] > 0.0) {
        any = true;
        if (k >= 1) higher = true;
      }
    }
  };
  scan(spec.lambda1);
  scan(spec.lambda2);
  if (!any) return 1.0;
  return higher ? std::sqrt(2.0) : 1.0;
}

// Addressable randomness: the Gaussian for (seed, trajectory, step, mode,
// species) is a pure function of that tuple, so concurrent trajectories and
// mode-refined reruns reuse exactly the same draws on shared modes.
namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t absorb(std::uint64_t h, std::uint64_t w) {
  return mix64(h ^ (w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

// Uniform in (0,1]; never returns 0 so log() is safe.
inline double uniform_pos(std::uint64_t bits) {
  return ((bits >> 11) + 1) * 0x1.0p-53;
}

inline double uniform_half_open(std::uint64_t bits) {
  return (bits >> 11) * 0x1.0p-53;
}

}  // namespace detail

inline double gaussian_draw(std::uint64_t seed, std::uint64_t trajectory,
                            std::uint64_t step, std::uint32_t mode,
                            std::uint32_t species) {
  std::uint64_t h = detail::absorb(seed, trajectory);
  h = detail::absorb(h, step);
  h = detail::absorb(h, (static_cast<std::uint64_t>(species) << 32) | mode);
  const double u1 = detail::uniform_pos(detail::mix64(h ^ 0x6a09e667f3bcc909ull));
  const double u2 =
      detail::uniform_half_open(detail::mix64(h ^ 0xbb67ae8584caa73bull));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

struct NoiseStream {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_id = 0;
  NoiseSpec spec;
};

// Scaled mode amplitudes of one increment: out[k] = sqrt(lambda_k dt) xi_k.
inline void sample_mode_amplitudes(const NoiseStream& stream, std::uint64_t step,
                                   double dt, int species,
                                   std::vector<double>& out) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  const std::vector<double>& lam = stream.spec.eigenvalues(species);
  out.assign(lam.size(), 0.0);
  for (std::size_t k = 0; k < lam.size(); ++k) {
    if (lam[k] == 0.0) continue;
    out[k] = std::sqrt(lam[k] * dt) *
             gaussian_draw(stream.master_seed, stream.trajectory_id, step,
                           static_cast<std::uint32_t>(k),
                           static_cast<std::uint32_t>(species));
  }
}

// One Q-Wiener increment as a grid field:
// dW(x) = sum_k sqrt(lambda_k dt) xi_k e_k(x).
inline ScalarField sample_increment(const NoiseStream& stream,
                                    const CosineBasis& basis, std::uint64_t step,
                                    double dt, int species) {
  const std::vector<double>& lam = stream.spec.eigenvalues(species);
  if (static_cast<int>(lam.size()) > basis.size())
    throw std::invalid_argument("noise modes exceed grid resolution");
  std::vector<double> amps;
  sample_mode_amplitudes(stream, step, dt, species, amps);
  ScalarField w(basis.size());
  for (std::size_t k = 0; k < amps.size(); ++k) {
    if (amps[k] == 0.0) continue;
    const double* row = basis.mode_row(static_cast<int>(k));
    for (int j = 0; j < basis.size(); ++j) w[j] += amps[k] * row[j];
  }
  return w;
}

}  // namespace predprey
