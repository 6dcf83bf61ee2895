#pragma once
#ifndef RCS_IO_HPP
#define RCS_IO_HPP

// Text formats shared by the CLI and the tests.
//
//   signal CSV   header "index,re,im", one row per sample, indices 0..N-1
//   sidecar CSV  header "kind,index,re,im", kind is "spectrum" or "outlier"
//   mask CSV     header "index,inlier", inlier is 0 or 1
//
// Doubles are written in shortest round-trip form.

#include "rcs/errors.hpp"
#include "rcs/sparse_recovery.hpp"
#include "rcs/transform.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace rcs::io {

/// Malformed input; line() is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

inline std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{})
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return fields;
}

inline double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
    throw ParseError(line, "not a number: '" + std::string(s) + "'");
  return v;
}

inline std::size_t parse_index(std::string_view s, std::size_t line) {
  s = trim(s);
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
    throw ParseError(line, "not a nonnegative integer: '" + std::string(s) + "'");
  return v;
}

inline void write_signal_csv(std::ostream &os, const ComplexSignal &x) {
  os << "index,re,im\n";
  for (std::size_t n = 0; n < x.size(); ++n)
    os << n << ',' << format_double(x[n].real()) << ',' << format_double(x[n].imag()) << '\n';
}

inline ComplexSignal read_signal_csv(std::istream &is) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<cplx> values;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty())
      continue;
    const auto fields = split_csv(text);
    if (!header) {
      if (fields.size() != 3 || fields[0] != "index" || fields[1] != "re" || fields[2] != "im")
        throw ParseError(lineno, "expected header 'index,re,im'");
      header = true;
      continue;
    }
    if (fields.size() != 3)
      throw ParseError(lineno, "expected 3 fields, found " + std::to_string(fields.size()));
    const auto idx = parse_index(fields[0], lineno);
    if (idx != values.size())
      throw ParseError(lineno, "expected index " + std::to_string(values.size()) + ", found " +
                                   std::to_string(idx));
    values.emplace_back(parse_double(fields[1], lineno), parse_double(fields[2], lineno));
  }
  if (!header)
    throw ParseError(0, "empty signal file");
  if (values.empty())
    throw ParseError(lineno, "signal file has no samples");
  return ComplexSignal(std::move(values));
}

struct GroundTruth {
  SparseSpectrum spectrum;
  std::vector<std::size_t> outliers;
  std::vector<cplx> outlier_values;
};

inline void write_sidecar_csv(std::ostream &os, const SparseSpectrum &spectrum,
                              std::span<const std::size_t> outliers, const ComplexSignal &impulses) {
  os << "kind,index,re,im\n";
  for (const auto &l : spectrum.lines())
    os << "spectrum," << l.bin << ',' << format_double(l.amplitude.real()) << ','
       << format_double(l.amplitude.imag()) << '\n';
  for (auto p : outliers)
    os << "outlier," << p << ',' << format_double(impulses[p].real()) << ','
       << format_double(impulses[p].imag()) << '\n';
}

inline GroundTruth read_sidecar_csv(std::istream &is, std::size_t ambient_length) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<SpectralLine> lines;
  GroundTruth truth;
  while (std::getline(is, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty())
      continue;
    const auto fields = split_csv(text);
    if (!header) {
      if (fields.size() != 4 || fields[0] != "kind")
        throw ParseError(lineno, "expected header 'kind,index,re,im'");
      header = true;
      continue;
    }
    if (fields.size() != 4)
      throw ParseError(lineno, "expected 4 fields");
    const auto idx = parse_index(fields[1], lineno);
    const cplx v{parse_double(fields[2], lineno), parse_double(fields[3], lineno)};
    if (fields[0] == "spectrum") {
      lines.push_back({idx, v});
    } else if (fields[0] == "outlier") {
      truth.outliers.push_back(idx);
      truth.outlier_values.push_back(v);
    } else {
      throw ParseError(lineno, "unknown kind '" + std::string(fields[0]) + "'");
    }
  }
  if (!header)
    throw ParseError(0, "empty sidecar file");
  try {
    truth.spectrum = SparseSpectrum(ambient_length, std::move(lines));
  } catch (const InvalidArgument &e) {
    throw ParseError(0, e.what());
  }
  return truth;
}

inline void write_mask_csv(std::ostream &os, std::size_t n, std::span<const std::size_t> inliers) {
  std::vector<int> mask(n, 0);
  for (auto i : inliers)
    mask.at(i) = 1;
  os << "index,inlier\n";
  for (std::size_t i = 0; i < n; ++i)
    os << i << ',' << mask[i] << '\n';
}

inline std::vector<int> read_mask_csv(std::istream &is) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<int> mask;
  while (std::getline(is, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty() || lineno == 1)
      continue;
    const auto fields = split_csv(text);
    if (fields.size() != 2)
      throw ParseError(lineno, "expected 2 fields");
    mask.push_back(static_cast<int>(parse_index(fields[1], lineno)));
  }
  return mask;
}

} // namespace rcs::io

#endif // RCS_IO_HPP
