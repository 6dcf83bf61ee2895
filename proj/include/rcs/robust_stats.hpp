#pragma once
#ifndef RCS_ROBUST_STATS_HPP
#define RCS_ROBUST_STATS_HPP

#include "rcs/errors.hpp"
#include "rcs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace rcs {

/// MAD = 0.6745 sigma for Gaussian data.
inline constexpr double kMadToSigma = 0.6745;

namespace detail {
// Destroys the order of `v`.
inline double median_inplace(std::vector<double> &v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}
} // namespace detail

/// Median of the values; even lengths average the two middle order statistics.
inline double median(std::span<const double> values) {
  if (values.empty())
    throw InvalidArgument("median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  return detail::median_inplace(v);
}

/// Median absolute deviation, median(|v - median(v)|).
inline double mad(std::span<const double> values) {
  const double centre = median(values);
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(),
                 [centre](double x) { return std::abs(x - centre); });
  return detail::median_inplace(dev);
}

struct NoiseScaleEstimate {
  double sigma_real = 0.0;
  double sigma_imag = 0.0;
  /// Per-part RMS, sqrt(sigma_real^2 + sigma_imag^2) / sqrt(2).
  double combined_sigma = 0.0;
};

/// MAD-based deviation estimates of the real and imaginary parts.
inline NoiseScaleEstimate robust_sigma(const ComplexSignal &x) {
  if (x.empty())
    throw InvalidArgument("robust sigma of an empty signal");
  std::vector<double> re(x.size()), im(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  NoiseScaleEstimate est;
  est.sigma_real = mad(re) / kMadToSigma;
  est.sigma_imag = mad(im) / kMadToSigma;
  est.combined_sigma = std::hypot(est.sigma_real, est.sigma_imag) / std::numbers::sqrt2;
  return est;
}

} // namespace rcs

#endif // RCS_ROBUST_STATS_HPP
