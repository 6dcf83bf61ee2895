#pragma once
#ifndef RCS_SPARSE_RECOVERY_HPP
#define RCS_SPARSE_RECOVERY_HPP

#include "rcs/errors.hpp"
#include "rcs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rcs {

/// One nonzero DFT coefficient X(bin).
struct SpectralLine {
  std::size_t bin = 0;
  cplx amplitude{};

  friend bool operator==(const SpectralLine &, const SpectralLine &) = default;
};

/// K nonzero coefficients of a length-N spectrum. Bins are pairwise distinct.
class SparseSpectrum {
public:
  SparseSpectrum() = default;
  SparseSpectrum(std::size_t ambient_length, std::vector<SpectralLine> lines)
      : ambient_(ambient_length), lines_(std::move(lines)) {
    std::vector<std::size_t> bins = support();
    if (std::adjacent_find(bins.begin(), bins.end()) != bins.end())
      throw InvalidArgument("sparse spectrum has repeated frequency bins");
    if (!bins.empty() && bins.back() >= ambient_)
      throw InvalidArgument("frequency bin " + std::to_string(bins.back()) +
                            " out of range for N = " + std::to_string(ambient_));
  }

  std::size_t ambient_length() const noexcept { return ambient_; }
  std::size_t sparsity() const noexcept { return lines_.size(); }
  const std::vector<SpectralLine> &lines() const noexcept { return lines_; }

  /// Sorted bin indices.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> bins;
    bins.reserve(lines_.size());
    for (const auto &l : lines_)
      bins.push_back(l.bin);
    std::sort(bins.begin(), bins.end());
    return bins;
  }

  /// Amplitude at `bin`, zero when the bin is not in the support.
  cplx amplitude_at(std::size_t bin) const {
    for (const auto &l : lines_)
      if (l.bin == bin)
        return l.amplitude;
    return {};
  }

  /// Full length-N spectrum with zeros off the support.
  Spectrum to_spectrum() const {
    std::vector<cplx> full(ambient_);
    for (const auto &l : lines_)
      full[l.bin] = l.amplitude;
    return Spectrum(std::move(full));
  }

private:
  std::size_t ambient_ = 0;
  std::vector<SpectralLine> lines_;
};

/// Available samples y(i) = x(n_i), with n_i strictly increasing.
class MeasurementSet {
public:
  MeasurementSet(std::size_t ambient_length, std::vector<std::size_t> indices,
                 std::vector<cplx> values)
      : ambient_(ambient_length), indices_(std::move(indices)), values_(std::move(values)) {
    if (indices_.size() != values_.size())
      throw DimensionMismatch("measurement set: " + std::to_string(indices_.size()) +
                              " indices but " + std::to_string(values_.size()) + " values");
    if (indices_.size() > ambient_)
      throw InvalidArgument("measurement set larger than the signal");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] >= ambient_)
        throw InvalidArgument("measurement index " + std::to_string(indices_[i]) +
                              " out of range");
      if (i > 0 && indices_[i] <= indices_[i - 1])
        throw InvalidArgument("measurement indices must be strictly increasing");
    }
  }

  /// Picks the samples of `signal` at `positions` (any order, no duplicates).
  static MeasurementSet from_signal(const ComplexSignal &signal,
                                    std::span<const std::size_t> positions) {
    std::vector<std::size_t> idx(positions.begin(), positions.end());
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      throw InvalidArgument("measurement positions contain duplicates");
    std::vector<cplx> vals;
    vals.reserve(idx.size());
    for (auto n : idx) {
      if (n >= signal.size())
        throw InvalidArgument("measurement index " + std::to_string(n) + " out of range");
      vals.push_back(signal[n]);
    }
    return MeasurementSet(signal.size(), std::move(idx), std::move(vals));
  }

  std::size_t ambient_length() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<std::size_t> &indices() const noexcept { return indices_; }
  const std::vector<cplx> &values() const noexcept { return values_; }

  MeasurementMatrix matrix() const { return partial_measurement_matrix(ambient_, indices_); }

  double norm() const noexcept {
    double e = 0.0;
    for (const auto &v : values_)
      e += std::norm(v);
    return std::sqrt(e);
  }

private:
  std::size_t ambient_ = 0;
  std::vector<std::size_t> indices_;
  std::vector<cplx> values_;
};

struct MpOptions {
  /// Early stop once ||e||_2 falls to or below this value. Disabled by
  /// default: the pursuit runs exactly K iterations.
  std::optional<double> residual_tolerance;
};

struct MpResult {
  SparseSpectrum spectrum;
  /// A_K X_K at the measurement positions.
  std::vector<cplx> fitted;
  double residual_norm = 0.0;
  /// ||e||_2 after each iteration.
  std::vector<double> residual_history;
};

struct L0Result {
  SparseSpectrum spectrum;
  double residual_norm = 0.0;
  std::uint64_t candidates_checked = 0;
};

namespace detail {

struct SupportFit {
  Eigen::VectorXcd coefficients;
  std::vector<cplx> fitted;
  double residual_norm = 0.0;
};

// `support` must be sorted ascending so that the same support always yields
// bit-identical coefficients and residual, whichever search produced it.
inline SupportFit fit_support(const MeasurementMatrix &a, std::span<const cplx> y,
                              std::span<const std::size_t> support) {
  const Eigen::MatrixXcd a_k = a.columns(support);
  SupportFit fit;
  fit.coefficients = least_squares_solve(a_k, y);
  const Eigen::VectorXcd yk = a_k * fit.coefficients;
  fit.fitted.assign(yk.data(), yk.data() + yk.size());
  double e = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    e += std::norm(y[i] - fit.fitted[i]);
  fit.residual_norm = std::sqrt(e);
  return fit;
}

inline SparseSpectrum make_sparse(std::size_t n, std::span<const std::size_t> support,
                                  const Eigen::VectorXcd &coefficients) {
  std::vector<SpectralLine> lines;
  lines.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    lines.push_back({support[i], coefficients(static_cast<Eigen::Index>(i))});
  return SparseSpectrum(n, std::move(lines));
}

inline void check_sparsity(std::size_t k, std::size_t m) {
  if (k == 0)
    throw InvalidArgument("target sparsity must be at least 1");
  if (k > m)
    throw InvalidArgument("target sparsity " + std::to_string(k) + " exceeds " +
                          std::to_string(m) + " measurements");
}

} // namespace detail

/// Matching pursuit with joint least-squares re-estimation.
///
/// Each iteration back-projects the residual (A^H e), adds the strongest
/// unselected bin to the support (smallest bin wins exact ties), refits all
/// selected coefficients by least squares and recomputes e = y - A_K X_K.
/// Throws ReconstructionFailure when the joint fit is rank deficient.
inline MpResult mp_reconstruct(const MeasurementMatrix &a, std::span<const cplx> y,
                               std::size_t k, const MpOptions &options = {}) {
  detail::check_sparsity(k, a.rows());
  if (y.size() != a.rows())
    throw DimensionMismatch("measurement vector does not match matrix rows");

  const std::size_t n = a.cols();
  const Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::VectorXcd residual = yv;
  std::vector<std::size_t> support;
  std::vector<bool> selected(n, false);
  MpResult result;
  detail::SupportFit fit;

  for (std::size_t iter = 0; iter < k; ++iter) {
    const Eigen::VectorXcd correlation = a.matrix().adjoint() * residual;
    std::size_t best = n;
    double best_mag = -1.0;
    for (std::size_t bin = 0; bin < n; ++bin) {
      if (selected[bin])
        continue;
      const double mag = std::abs(correlation(static_cast<Eigen::Index>(bin)));
      if (mag > best_mag) {
        best_mag = mag;
        best = bin;
      }
    }
    if (best == n)
      throw ReconstructionFailure("no unselected frequency bin left");
    selected[best] = true;
    support.insert(std::upper_bound(support.begin(), support.end(), best), best);

    try {
      fit = detail::fit_support(a, y, support);
    } catch (const RankDeficient &e) {
      throw ReconstructionFailure(std::string("matching pursuit: ") + e.what());
    }
    for (std::size_t i = 0; i < y.size(); ++i)
      residual(static_cast<Eigen::Index>(i)) = y[i] - fit.fitted[i];
    result.residual_history.push_back(fit.residual_norm);
    if (options.residual_tolerance && fit.residual_norm <= *options.residual_tolerance)
      break;
  }

  result.spectrum = detail::make_sparse(n, support, fit.coefficients);
  result.fitted = std::move(fit.fitted);
  result.residual_norm = fit.residual_norm;
  return result;
}

inline MpResult mp_reconstruct(const MeasurementSet &m, std::size_t k,
                               const MpOptions &options = {}) {
  detail::check_sparsity(k, m.size());
  return mp_reconstruct(m.matrix(), m.values(), k, options);
}

/// Number of K-subsets of N items, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // c * num / i is always an integer; guard the multiplication.
    if (c > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    c = c * num / i;
  }
  return c;
}

/// Exhaustive minimum-residual search over all K-subsets of [0, N-1].
/// Returns the support with the smallest least-squares residual; ties go to
/// the lexicographically smallest support. Rank-deficient supports are
/// skipped.
inline L0Result exhaustive_l0_oracle(const MeasurementSet &m, std::size_t k,
                                     std::uint64_t budget = 1'000'000) {
  detail::check_sparsity(k, m.size());
  const std::size_t n = m.ambient_length();
  const std::uint64_t total = binomial(n, k);
  if (total > budget)
    throw BudgetExceeded("C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " +
                         std::to_string(total) + " supports exceeds budget " +
                         std::to_string(budget));

  const MeasurementMatrix a = m.matrix();
  std::vector<std::size_t> support(k);
  for (std::size_t i = 0; i < k; ++i)
    support[i] = i;

  L0Result best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  bool found = false;
  for (;;) {
    ++best.candidates_checked;
    try {
      auto fit = detail::fit_support(a, m.values(), support);
      if (!found || fit.residual_norm < best.residual_norm) {
        found = true;
        best.residual_norm = fit.residual_norm;
        best.spectrum = detail::make_sparse(n, support, fit.coefficients);
      }
    } catch (const RankDeficient &) {
    }

    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && support[i - 1] == n - k + (i - 1))
      --i;
    if (i == 0)
      break;
    ++support[i - 1];
    for (std::size_t j = i; j < k; ++j)
      support[j] = support[j - 1] + 1;
  }
  if (!found)
    throw ReconstructionFailure("exhaustive search: every support is rank deficient");
  return best;
}

/// x_R = IDFT of the sparse spectrum embedded in zeros.
inline ComplexSignal reconstruct_signal(const SparseSpectrum &s) { return idft(s.to_spectrum()); }

} // namespace rcs

#endif // RCS_SPARSE_RECOVERY_HPP
