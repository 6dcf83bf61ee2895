#pragma once
#ifndef RCS_RANSAC_HPP
#define RCS_RANSAC_HPP

// RANSAC consensus denoising of DFT-sparse signals.
//
// Random M-sample subsets are reconstructed by matching pursuit. The samples
// within distance d of a trial model form its consensus set; the loop stops
// once a consensus set reaches T samples (or after N_max trials), and the
// signal is reconstructed again from the largest consensus set found.

#include "rcs/errors.hpp"
#include "rcs/random.hpp"
#include "rcs/robust_stats.hpp"
#include "rcs/sparse_recovery.hpp"
#include "rcs/transform.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcs {

/// ceil(3N/4): tolerate up to N/4 outliers.
inline std::size_t default_consensus_threshold(std::size_t n) { return (3 * n + 3) / 4; }

/// Inlier bound for complex Gaussian errors with per-part deviation `sigma`.
/// The modulus of such an error has RMS sigma * sqrt(2), hence the default
/// correction factor.
inline double inlier_bound_from_sigma(double sigma, double multiplier = 2.5,
                                      double correction = std::numbers::sqrt2) {
  return multiplier * correction * sigma;
}

struct RansacConfig {
  std::size_t subset_size = 32; // M
  double inlier_bound = 0.0;    // d
  /// T; ceil(3N/4) when unset.
  std::optional<std::size_t> consensus_threshold;
  std::size_t max_trials = 100'000; // N_max
  std::size_t sparsity = 5;         // K
  std::uint64_t rng_seed = 0;

  std::size_t threshold_for(std::size_t n) const {
    return consensus_threshold.value_or(default_consensus_threshold(n));
  }

  /// Throws InvalidArgument on violated invariants; returns non-fatal
  /// warnings (currently only the K <= M/5 reliability guideline).
  std::vector<std::string> validate(std::size_t n) const {
    if (n == 0)
      throw InvalidArgument("signal is empty");
    if (sparsity == 0)
      throw InvalidArgument("sparsity K must be at least 1");
    if (sparsity > subset_size)
      throw InvalidArgument("sparsity K = " + std::to_string(sparsity) +
                            " exceeds subset size M = " + std::to_string(subset_size));
    if (subset_size > n)
      throw InvalidArgument("subset size M = " + std::to_string(subset_size) +
                            " exceeds N = " + std::to_string(n));
    const std::size_t t = threshold_for(n);
    if (t == 0 || t > n)
      throw InvalidArgument("consensus threshold T must lie in [1, N]");
    if (max_trials == 0)
      throw InvalidArgument("N_max must be at least 1");
    if (!(inlier_bound >= 0.0))
      throw InvalidArgument("inlier bound d must be nonnegative");

    std::vector<std::string> warnings;
    if (5 * sparsity > subset_size)
      warnings.push_back("K = " + std::to_string(sparsity) + " > M/5 = " +
                         std::to_string(static_cast<double>(subset_size) / 5.0) +
                         ": subset reconstructions may be unreliable");
    return warnings;
  }
};

struct DenoiseOutcome {
  /// x_R from the consensus set (or the passthrough input, see below).
  ComplexSignal reconstructed;
  /// Sorted consensus indices of the best trial.
  std::vector<std::size_t> consensus;
  std::size_t trials_used = 0;
  bool reached_consensus = false;
  SparseSpectrum final_sparse;

  /// The best trial's subset and its reconstruction (the mid-result).
  std::vector<std::size_t> subset;
  ComplexSignal subset_reconstruction;
  /// |D| of every trial in order; 0 for failed trials.
  std::vector<std::size_t> consensus_trace;
  /// Every trial failed; `reconstructed` is the noisy input.
  bool passthrough = false;
  /// The consensus refit failed and the best trial model was kept.
  bool used_trial_model = false;
  std::vector<std::string> warnings;
};

/// {n : |model(n) - noisy(n)| <= d}. The bound is inclusive.
inline std::vector<std::size_t> consensus_set(const ComplexSignal &noisy, const ComplexSignal &model,
                                              double d) {
  if (noisy.size() != model.size())
    throw DimensionMismatch("consensus set: signal and model lengths differ");
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < noisy.size(); ++n)
    if (std::abs(model[n] - noisy[n]) <= d)
      out.push_back(n);
  return out;
}

/// The default subset reconstructor: K-iteration matching pursuit.
struct MatchingPursuit {
  MpResult operator()(const MeasurementSet &m, std::size_t k) const { return mp_reconstruct(m, k); }
};

/// Runs the consensus loop. `reconstruct(measurements, K)` must return an
/// MpResult or throw ReconstructionFailure; a failed trial still counts
/// against N_max.
template <typename Reconstructor = MatchingPursuit>
DenoiseOutcome ransac_denoise(const ComplexSignal &noisy, const RansacConfig &cfg,
                              Reconstructor &&reconstruct = {}) {
  const std::size_t n = noisy.size();
  DenoiseOutcome out;
  out.warnings = cfg.validate(n);
  const std::size_t threshold = cfg.threshold_for(n);
  const std::size_t k = cfg.sparsity;

  Rng rng = make_rng(cfg.rng_seed, Stream::ransac);

  struct Best {
    std::vector<std::size_t> consensus;
    std::vector<std::size_t> subset;
    ComplexSignal model;
    SparseSpectrum sparse;
    double residual = std::numeric_limits<double>::infinity();
  };
  std::optional<Best> best;

  while (out.trials_used < cfg.max_trials) {
    ++out.trials_used;
    auto subset = random_subset(n, cfg.subset_size, rng);
    const auto measurements = MeasurementSet::from_signal(noisy, subset);

    MpResult fit;
    try {
      fit = reconstruct(measurements, k);
    } catch (const ReconstructionFailure &) {
      out.consensus_trace.push_back(0);
      continue;
    }
    auto model = reconstruct_signal(fit.spectrum);
    auto agreeing = consensus_set(noisy, model, cfg.inlier_bound);
    out.consensus_trace.push_back(agreeing.size());

    const bool better = !best || agreeing.size() > best->consensus.size() ||
                        (agreeing.size() == best->consensus.size() &&
                         fit.residual_norm < best->residual);
    if (better)
      best = Best{std::move(agreeing), measurements.indices(), std::move(model),
                  std::move(fit.spectrum), fit.residual_norm};
    if (best->consensus.size() >= threshold) {
      out.reached_consensus = true;
      break;
    }
  }

  if (!best) {
    out.passthrough = true;
    out.reconstructed = noisy;
    out.subset_reconstruction = noisy;
    out.final_sparse = SparseSpectrum(n, {});
    out.warnings.emplace_back("every trial reconstruction failed; returning the input");
    return out;
  }

  out.consensus = best->consensus;
  out.subset = best->subset;
  out.subset_reconstruction = best->model;

  bool refit = false;
  if (out.consensus.size() >= k) {
    try {
      const auto consensus_meas = MeasurementSet::from_signal(noisy, out.consensus);
      auto final_fit = reconstruct(consensus_meas, k);
      out.final_sparse = std::move(final_fit.spectrum);
      out.reconstructed = reconstruct_signal(out.final_sparse);
      refit = true;
    } catch (const ReconstructionFailure &) {
    }
  }
  if (!refit) {
    out.used_trial_model = true;
    out.final_sparse = std::move(best->sparse);
    out.reconstructed = std::move(best->model);
    out.warnings.emplace_back("consensus refit failed; keeping the best trial model");
  }
  if (!out.reached_consensus)
    out.warnings.push_back("consensus of " + std::to_string(threshold) + " samples not reached in " +
                           std::to_string(out.trials_used) + " trials (best " +
                           std::to_string(out.consensus.size()) + ")");
  return out;
}

} // namespace rcs

#endif // RCS_RANSAC_HPP
