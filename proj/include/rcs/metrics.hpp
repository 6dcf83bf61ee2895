#pragma once
#ifndef RCS_METRICS_HPP
#define RCS_METRICS_HPP

// SNR measurement and the closed-form predictions for RANSAC sampling:
// clean-subset probability, expected trial counts and output-SNR gains.

#include "rcs/errors.hpp"
#include "rcs/transform.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace rcs {

/// Returned by snr_db when the error energy underflows.
inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

inline bool is_infinite_snr(double db) noexcept { return std::isinf(db) && db > 0; }

/// 10 log10(sum |x|^2 / sum |x - x_hat|^2). The error energy counts as zero
/// (infinite SNR) below 1e-300 of the signal energy.
template <typename Tag>
double snr_db(const ComplexVector<Tag> &reference, const ComplexVector<Tag> &estimate) {
  if (reference.size() != estimate.size())
    throw DimensionMismatch("snr: reference and estimate lengths differ");
  const double signal = reference.energy();
  if (!(signal > 0.0))
    throw InvalidArgument("snr: reference signal is all zero");
  double error = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i)
    error += std::norm(reference[i] - estimate[i]);
  if (error < 1e-300 * signal)
    return kInfiniteSnr;
  return 10.0 * std::log10(signal / error);
}

/// Probability that M distinct uniformly drawn samples out of N avoid all I
/// outliers: prod_{i<M} (N - I - i) / (N - i). Zero when M > N - I.
inline double clean_subset_probability(std::size_t m, std::size_t n, std::size_t i) {
  if (m == 0 || m > n)
    throw InvalidArgument("subset size must lie in [1, N]");
  if (i > n)
    throw InvalidArgument("outlier count exceeds N");
  if (m > n - i)
    return 0.0;
  double p = 1.0;
  for (std::size_t t = 0; t < m; ++t)
    p *= static_cast<double>(n - i - t) / static_cast<double>(n - t);
  return p;
}

/// Expected number of RANSAC draws until the first outlier-free subset, 1/P.
inline double expected_trials(std::size_t m, std::size_t n, std::size_t i) {
  const double p = clean_subset_probability(m, n, i);
  if (p == 0.0)
    throw Infeasible("no outlier-free subset of " + std::to_string(m) + " samples exists (N - I = " +
                     std::to_string(n - i) + ")");
  return 1.0 / p;
}

/// The textbook RANSAC trial count ln(1 - P) / ln(1 - ((N - I)/N)^M).
///
/// It treats the M draws as independent, so it is only accurate when
/// (N - I - M)/(N - M) is close to (N - I)/N. Sampling without replacement
/// makes the true clean-subset probability smaller than ((N - I)/N)^M.
/// Returns 0 when I = 0.
inline double classic_ransac_trials(std::size_t m, std::size_t n, std::size_t i,
                                    double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InvalidArgument("confidence must lie in (0, 1)");
  if (m == 0 || m > n)
    throw InvalidArgument("subset size must lie in [1, N]");
  if (i >= n)
    throw InvalidArgument("outlier count must be below N");
  if (i == 0)
    return 0.0;
  const double inlier_ratio = static_cast<double>(n - i) / static_cast<double>(n);
  const double clean = std::pow(inlier_ratio, static_cast<double>(m));
  return std::log1p(-confidence) / std::log1p(-clean);
}

/// SNR after reconstructing a K-sparse signal from D noisy samples:
/// snr_in0 + 10 log10(D / K).
inline double predicted_snr_out(double snr_in0, double d, double k) {
  if (!(k >= 1.0) || !(d >= k))
    throw InvalidArgument("predicted snr: require D >= K >= 1");
  return snr_in0 + 10.0 * std::log10(d / k);
}

/// Gain of the consensus reconstruction over the subset one, 10 log10(D / M).
inline double snr_improvement_over_subset(double d, double m) {
  if (!(d >= 1.0) || !(m >= 1.0))
    throw InvalidArgument("snr improvement: require D >= 1 and M >= 1");
  return 10.0 * std::log10(d / m);
}

} // namespace rcs

#endif // RCS_METRICS_HPP
