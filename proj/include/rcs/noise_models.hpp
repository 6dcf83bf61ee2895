#pragma once
#ifndef RCS_NOISE_MODELS_HPP
#define RCS_NOISE_MODELS_HPP

// Seeded test-signal generators: DFT-sparse signals with random positions and
// phases, complex Gaussian inlier noise and complex Cauchy impulses.

#include "rcs/errors.hpp"
#include "rcs/random.hpp"
#include "rcs/sparse_recovery.hpp"
#include "rcs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace rcs {

struct SignalSpec {
  std::size_t length = 128;
  std::size_t sparsity = 5;
  /// Time-domain amplitude |A_i| of each component, uniform in [low, high].
  double amplitude_low = 1.0;
  double amplitude_high = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (length == 0)
      throw InvalidArgument("signal length must be positive");
    if (sparsity > length)
      throw InvalidArgument("sparsity exceeds signal length");
    if (!(amplitude_low <= amplitude_high))
      throw InvalidArgument("amplitude range is empty");
  }
};

struct NoiseSpec {
  /// Standard deviation of each of the real and imaginary parts.
  double gaussian_sigma = 0.0;
  std::size_t outlier_count = 0;
  double cauchy_scale = 3.0;
  cplx outlier_offset{0.0, 0.0};

  void validate(std::size_t n) const {
    if (!(gaussian_sigma >= 0.0))
      throw InvalidArgument("gaussian sigma must be nonnegative");
    if (outlier_count > n)
      throw InvalidArgument("more outliers than samples");
    if (!(cauchy_scale > 0.0))
      throw InvalidArgument("cauchy scale must be positive");
  }
};

struct SparseSignal {
  ComplexSignal signal;
  /// Ground-truth DFT coefficients X(k) on the support.
  SparseSpectrum truth;
};

struct ImpulsiveNoise {
  ComplexSignal noise;
  /// Sorted positions of the planted outliers.
  std::vector<std::size_t> positions;
};

/// x(n) = sum_i A_i exp(j(2 pi k_i n / N + phi_i)) with K distinct random bins
/// k_i, phases uniform on [0, 2 pi) and |A_i| uniform on the amplitude range.
/// The returned truth stores X(k_i) = N A_i exp(j phi_i).
inline SparseSignal gen_sparse_signal(const SignalSpec &spec) {
  spec.validate();
  const std::size_t n = spec.length;
  Rng rng = make_rng(spec.seed, Stream::support);
  auto bins = random_subset(n, spec.sparsity, rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amp(spec.amplitude_low, spec.amplitude_high);

  std::vector<SpectralLine> lines;
  lines.reserve(bins.size());
  for (auto bin : bins) {
    const double a = spec.amplitude_low == spec.amplitude_high ? spec.amplitude_low : amp(rng);
    const double phi = phase(rng);
    lines.push_back({bin, std::polar(a * static_cast<double>(n), phi)});
  }
  std::sort(lines.begin(), lines.end(),
            [](const SpectralLine &l, const SpectralLine &r) { return l.bin < r.bin; });
  SparseSpectrum truth(n, std::move(lines));
  return {reconstruct_signal(truth), std::move(truth)};
}

/// Zero-mean complex Gaussian noise, deviation `sigma` per real/imaginary part.
inline ComplexSignal gen_gaussian_noise(std::size_t n, double sigma, Rng &rng) {
  if (!(sigma >= 0.0))
    throw InvalidArgument("gaussian sigma must be nonnegative");
  std::vector<cplx> out(n);
  if (sigma == 0.0)
    return ComplexSignal(std::move(out));
  std::normal_distribution<double> g(0.0, sigma);
  for (auto &v : out) {
    const double re = g(rng);
    const double im = g(rng);
    v = {re, im};
  }
  return ComplexSignal(std::move(out));
}

/// Complex Cauchy impulses s g1/g2 + j s g3/g4 + offset at `outlier_count`
/// distinct random positions, zero elsewhere.
inline ImpulsiveNoise gen_impulsive_noise(std::size_t n, const NoiseSpec &spec, Rng &rng) {
  spec.validate(n);
  auto positions = random_subset(n, spec.outlier_count, rng);
  std::sort(positions.begin(), positions.end());

  std::normal_distribution<double> g(0.0, 1.0);
  auto ratio = [&] {
    for (;;) {
      const double num = g(rng);
      const double den = g(rng);
      if (std::abs(den) >= 1e-300)
        return num / den;
    }
  };

  std::vector<cplx> out(n);
  for (auto p : positions) {
    const double re = spec.cauchy_scale * ratio();
    const double im = spec.cauchy_scale * ratio();
    out[p] = cplx{re, im} + spec.outlier_offset;
  }
  return {ComplexSignal(std::move(out)), std::move(positions)};
}

} // namespace rcs

#endif // RCS_NOISE_MODELS_HPP
