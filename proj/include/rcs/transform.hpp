#pragma once
#ifndef RCS_TRANSFORM_HPP
#define RCS_TRANSFORM_HPP

// Complex vectors, the DFT pair, partial inverse-DFT measurement matrices and
// the complex least-squares solve used by the sparse reconstructor.
//
// Conventions:
//   X(k) = sum_n x(n) exp(-j 2 pi n k / N)          (no scaling)
//   x(n) = (1/N) sum_k X(k) exp(+j 2 pi n k / N)

#include "rcs/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rcs {

using cplx = std::complex<double>;

/// Fixed-length vector of complex values. The tag keeps time-domain signals
/// and DFT-domain spectra from being mixed up.
template <typename Tag> class ComplexVector {
public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : values_(n) {}
  explicit ComplexVector(std::vector<cplx> values) : values_(std::move(values)) {}
  ComplexVector(std::initializer_list<cplx> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const cplx &operator[](std::size_t i) const { return values_[i]; }
  const cplx &at(std::size_t i) const { return values_.at(i); }
  std::span<const cplx> view() const noexcept { return values_; }
  const std::vector<cplx> &values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const cplx &v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  double norm() const noexcept { return std::sqrt(energy()); }
  double energy() const noexcept {
    double e = 0.0;
    for (const auto &v : values_)
      e += std::norm(v);
    return e;
  }

  friend bool operator==(const ComplexVector &, const ComplexVector &) = default;

  friend ComplexVector operator+(const ComplexVector &a, const ComplexVector &b) {
    check_same_length(a, b);
    std::vector<cplx> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = a.values_[i] + b.values_[i];
    return ComplexVector(std::move(out));
  }
  friend ComplexVector operator-(const ComplexVector &a, const ComplexVector &b) {
    check_same_length(a, b);
    std::vector<cplx> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = a.values_[i] - b.values_[i];
    return ComplexVector(std::move(out));
  }

private:
  static void check_same_length(const ComplexVector &a, const ComplexVector &b) {
    if (a.size() != b.size())
      throw DimensionMismatch("vector lengths differ: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
  }

  std::vector<cplx> values_;
};

struct TimeDomainTag {};
struct FrequencyDomainTag {};

/// Time-domain samples x(n).
using ComplexSignal = ComplexVector<TimeDomainTag>;
/// Full DFT vector X(k).
using Spectrum = ComplexVector<FrequencyDomainTag>;

namespace detail {

/// exp(j 2 pi m / N) for m = 0..N-1, each evaluated directly.
inline std::vector<cplx> unit_roots(std::size_t n) {
  std::vector<cplx> roots(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m)
    roots[m] = std::polar(1.0, step * static_cast<double>(m));
  return roots;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 decimation-in-time. sign = -1 forward, +1 inverse
// (unscaled).
inline void fft_radix2(std::vector<cplx> &a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }
  const auto roots = unit_roots(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = roots[k * stride];
        if (sign < 0)
          w = std::conj(w);
        const cplx u = a[start + k];
        const cplx v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

inline std::vector<cplx> dft_direct(std::span<const cplx> in, int sign) {
  const std::size_t n = in.size();
  const auto roots = unit_roots(n);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const cplx w = roots[(t * k) % n];
      acc += in[t] * (sign < 0 ? std::conj(w) : w);
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<cplx> transform(std::span<const cplx> in, int sign) {
  if (is_power_of_two(in.size())) {
    std::vector<cplx> a(in.begin(), in.end());
    fft_radix2(a, sign);
    return a;
  }
  return dft_direct(in, sign);
}

} // namespace detail

/// Forward DFT without normalisation. Radix-2 FFT for power-of-two lengths,
/// direct summation otherwise.
inline Spectrum dft(const ComplexSignal &x) { return Spectrum(detail::transform(x.view(), -1)); }

/// Inverse DFT, carrying the 1/N factor.
inline ComplexSignal idft(const Spectrum &X) {
  auto out = detail::transform(X.view(), +1);
  const double scale = X.empty() ? 1.0 : 1.0 / static_cast<double>(X.size());
  for (auto &v : out)
    v *= scale;
  return ComplexSignal(std::move(out));
}

/// Rows of the inverse DFT matrix at a set of sample positions.
/// Entry (i, k) is (1/N) exp(j 2 pi n_i k / N).
class MeasurementMatrix {
public:
  std::size_t rows() const noexcept { return indices_.size(); }
  std::size_t cols() const noexcept { return ambient_; }
  std::size_t ambient_length() const noexcept { return ambient_; }
  const std::vector<std::size_t> &source_indices() const noexcept { return indices_; }
  const Eigen::MatrixXcd &matrix() const noexcept { return matrix_; }
  cplx operator()(std::size_t i, std::size_t k) const {
    return matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }

  /// A_K: the columns selected by `bins`, in the given order.
  Eigen::MatrixXcd columns(std::span<const std::size_t> bins) const {
    Eigen::MatrixXcd out(matrix_.rows(), static_cast<Eigen::Index>(bins.size()));
    for (std::size_t c = 0; c < bins.size(); ++c)
      out.col(static_cast<Eigen::Index>(c)) = matrix_.col(static_cast<Eigen::Index>(bins[c]));
    return out;
  }

  /// A X for a full-length spectrum.
  std::vector<cplx> apply(const Spectrum &X) const {
    if (X.size() != ambient_)
      throw DimensionMismatch("spectrum length " + std::to_string(X.size()) +
                              " does not match matrix width " + std::to_string(ambient_));
    const Eigen::Map<const Eigen::VectorXcd> x(X.values().data(),
                                               static_cast<Eigen::Index>(X.size()));
    const Eigen::VectorXcd y = matrix_ * x;
    return {y.data(), y.data() + y.size()};
  }

private:
  friend MeasurementMatrix partial_measurement_matrix(std::size_t, std::span<const std::size_t>);

  MeasurementMatrix(std::size_t n, std::vector<std::size_t> indices, Eigen::MatrixXcd m)
      : ambient_(n), indices_(std::move(indices)), matrix_(std::move(m)) {}

  std::size_t ambient_ = 0;
  std::vector<std::size_t> indices_;
  Eigen::MatrixXcd matrix_;
};

/// Builds the |indices| x N partial inverse-DFT matrix. The index set is
/// sorted; duplicates and out-of-range positions are rejected.
inline MeasurementMatrix partial_measurement_matrix(std::size_t n,
                                                    std::span<const std::size_t> indices) {
  if (n == 0)
    throw InvalidArgument("signal length must be positive");
  if (indices.empty())
    throw InvalidArgument("measurement index set is empty");
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("measurement index set contains duplicates");
  if (sorted.back() >= n)
    throw InvalidArgument("measurement index " + std::to_string(sorted.back()) +
                          " out of range for N = " + std::to_string(n));

  const auto roots = detail::unit_roots(n);
  const double scale = 1.0 / static_cast<double>(n);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(sorted.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t k = 0; k < n; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          roots[(sorted[i] * k) % n] * scale;
  return MeasurementMatrix(n, std::move(sorted), std::move(m));
}

inline MeasurementMatrix partial_measurement_matrix(std::size_t n,
                                                    std::initializer_list<std::size_t> indices) {
  return partial_measurement_matrix(n, std::span<const std::size_t>(indices.begin(), indices.size()));
}

/// Back-projection A^H y.
inline Spectrum adjoint_apply(const MeasurementMatrix &a, std::span<const cplx> y) {
  if (y.size() != a.rows())
    throw DimensionMismatch("measurement vector has " + std::to_string(y.size()) +
                            " entries, matrix has " + std::to_string(a.rows()) + " rows");
  const Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::VectorXcd x0 = a.matrix().adjoint() * yv;
  return Spectrum(std::vector<cplx>(x0.data(), x0.data() + x0.size()));
}

/// Minimiser of ||A_K x - y||_2 through column-pivoted Householder QR.
/// Rank tolerance is max(M, K) * eps * (largest column norm); below it the
/// solve throws RankDeficient.
inline Eigen::VectorXcd least_squares_solve(const Eigen::MatrixXcd &a_k, std::span<const cplx> y) {
  const auto m = static_cast<std::size_t>(a_k.rows());
  const auto k = static_cast<std::size_t>(a_k.cols());
  if (y.size() != m)
    throw DimensionMismatch("least squares: " + std::to_string(y.size()) +
                            " measurements for " + std::to_string(m) + " rows");
  if (k == 0)
    throw InvalidArgument("least squares: no columns");
  if (m < k)
    throw InvalidArgument("least squares: underdetermined system (" + std::to_string(m) + " < " +
                          std::to_string(k) + ")");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a_k);
  qr.setThreshold(static_cast<double>(std::max(m, k)) * std::numeric_limits<double>::epsilon());
  const auto rank = static_cast<std::size_t>(qr.rank());
  if (rank < k)
    throw RankDeficient(rank, k);
  const Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(m));
  return qr.solve(yv);
}

} // namespace rcs

#endif // RCS_TRANSFORM_HPP
