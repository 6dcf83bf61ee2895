#pragma once
#ifndef RCS_EXPERIMENT_HPP
#define RCS_EXPERIMENT_HPP

// Seeded Monte-Carlo experiments: synthesize a sparse signal with inlier
// noise and impulses, denoise it, and record trial counts, consensus size and
// SNRs per run.

#include "rcs/errors.hpp"
#include "rcs/io.hpp"
#include "rcs/metrics.hpp"
#include "rcs/noise_models.hpp"
#include "rcs/random.hpp"
#include "rcs/ransac.hpp"
#include "rcs/robust_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <istream>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace rcs {

/// How the inlier bound d is chosen for each run.
struct InlierBoundRule {
  enum class Kind {
    /// 2.5 sqrt(2) times the MAD estimate of the noisy signal.
    robust,
    /// 2.5 times the scenario's complex noise deviation.
    from_sigma,
    fixed,
  };
  Kind kind = Kind::from_sigma;
  double value = 0.0;

  static InlierBoundRule parse(std::string_view s) {
    if (s == "auto")
      return {Kind::robust, 0.0};
    if (s == "sigma")
      return {Kind::from_sigma, 0.0};
    const double v = io::parse_double(s, 0);
    if (!(v >= 0.0))
      throw InvalidArgument("inlier bound must be nonnegative");
    return {Kind::fixed, v};
  }

  std::string str() const {
    switch (kind) {
    case Kind::robust:
      return "auto";
    case Kind::from_sigma:
      return "sigma";
    case Kind::fixed:
      break;
    }
    return io::format_double(value);
  }
};

struct ExperimentScenario {
  std::size_t n = 128;
  std::size_t k = 5;
  std::size_t m = 32;
  std::size_t outliers = 16;
  /// Complex deviation of the inlier noise, E|eps|^2 = sigma^2. Each of the
  /// real and imaginary parts gets sigma / sqrt(2).
  double sigma = 0.5;
  cplx outlier_offset{0.0, 0.0};
  double cauchy_scale = 3.0;
  double amplitude_low = 1.0;
  double amplitude_high = 1.0;
  InlierBoundRule bound;
  std::optional<std::size_t> consensus_threshold;
  std::size_t max_trials = 100'000;
  std::size_t runs = 100;
  std::uint64_t seed = 42;

  double per_part_sigma() const { return sigma / std::numbers::sqrt2; }
  std::size_t threshold() const { return consensus_threshold.value_or(default_consensus_threshold(n)); }

  /// Throws on invalid scenarios; returns warnings for hopeless ones.
  std::vector<std::string> validate() const {
    if (runs == 0)
      throw InvalidArgument("runs must be at least 1");
    if (outliers > n)
      throw InvalidArgument("more outliers than samples");
    if (!(sigma >= 0.0))
      throw InvalidArgument("sigma must be nonnegative");
    SignalSpec{n, k, amplitude_low, amplitude_high, seed}.validate();
    NoiseSpec{per_part_sigma(), outliers, cauchy_scale, outlier_offset}.validate(n);
    RansacConfig cfg;
    cfg.subset_size = m;
    cfg.sparsity = k;
    cfg.consensus_threshold = consensus_threshold;
    cfg.max_trials = max_trials;
    auto warnings = cfg.validate(n);
    if (m > n - outliers)
      warnings.push_back("M = " + std::to_string(m) + " > N - I = " + std::to_string(n - outliers) +
                         ": no outlier-free subset exists");
    if (n - outliers < threshold())
      warnings.push_back("fewer inliers than the consensus threshold T = " +
                         std::to_string(threshold()));
    return warnings;
  }
};

/// One synthetic noisy observation with its ground truth.
struct Realization {
  ComplexSignal clean;
  /// clean + Gaussian inlier noise.
  ComplexSignal inlier_noisy;
  /// clean + Gaussian noise + impulses.
  ComplexSignal noisy;
  SparseSpectrum truth;
  ImpulsiveNoise impulses;
};

inline Realization make_realization(const ExperimentScenario &s, std::uint64_t seed) {
  auto sparse = gen_sparse_signal({s.n, s.k, s.amplitude_low, s.amplitude_high, seed});
  Rng gauss_rng = make_rng(seed, Stream::gaussian);
  Rng impulse_rng = make_rng(seed, Stream::impulse);
  auto eps = gen_gaussian_noise(s.n, s.per_part_sigma(), gauss_rng);
  auto nu = gen_impulsive_noise(
      s.n, NoiseSpec{s.per_part_sigma(), s.outliers, s.cauchy_scale, s.outlier_offset}, impulse_rng);
  Realization r;
  r.clean = std::move(sparse.signal);
  r.truth = std::move(sparse.truth);
  r.inlier_noisy = r.clean + eps;
  r.noisy = r.inlier_noisy + nu.noise;
  r.impulses = std::move(nu);
  return r;
}

inline std::uint64_t run_seed(std::uint64_t master, std::size_t run_index) {
  return derive_seed(master, Stream::run, run_index);
}

inline double resolve_inlier_bound(const InlierBoundRule &rule, const ExperimentScenario &s,
                                   const ComplexSignal &noisy) {
  switch (rule.kind) {
  case InlierBoundRule::Kind::robust:
    return inlier_bound_from_sigma(robust_sigma(noisy).combined_sigma);
  case InlierBoundRule::Kind::from_sigma:
    return inlier_bound_from_sigma(s.per_part_sigma());
  case InlierBoundRule::Kind::fixed:
    break;
  }
  return rule.value;
}

struct RunRecord {
  std::size_t run_index = 0;
  std::size_t trials = 0; // N_it
  std::size_t consensus = 0; // D
  double snr_in = 0.0;
  double snr_in0 = 0.0;
  double snr_out0 = 0.0;
  double snr_out = 0.0;
  bool reached_consensus = false;
  double inlier_bound = 0.0;
};

struct RunSummary {
  double trials = 0.0;
  double snr_in = 0.0;
  double snr_in0 = 0.0;
  double snr_out0 = 0.0;
  double snr_out = 0.0;
  double consensus = 0.0;
  double reached_fraction = 0.0;
};

struct ExperimentResult {
  ExperimentScenario scenario;
  std::vector<RunRecord> records;
  RunSummary summary;
  std::vector<std::string> warnings;
};

inline RunRecord run_once(const ExperimentScenario &s, std::size_t run_index) {
  const auto seed = run_seed(s.seed, run_index);
  const auto r = make_realization(s, seed);

  RansacConfig cfg;
  cfg.subset_size = s.m;
  cfg.sparsity = s.k;
  cfg.consensus_threshold = s.consensus_threshold;
  cfg.max_trials = s.max_trials;
  cfg.rng_seed = seed;
  cfg.inlier_bound = resolve_inlier_bound(s.bound, s, r.noisy);
  const auto outcome = ransac_denoise(r.noisy, cfg);

  RunRecord rec;
  rec.run_index = run_index;
  rec.trials = outcome.trials_used;
  rec.consensus = outcome.consensus.size();
  rec.reached_consensus = outcome.reached_consensus;
  rec.inlier_bound = cfg.inlier_bound;
  rec.snr_in = snr_db(r.clean, r.noisy);
  rec.snr_in0 = snr_db(r.clean, r.inlier_noisy);
  rec.snr_out0 = snr_db(r.clean, outcome.subset_reconstruction);
  rec.snr_out = snr_db(r.clean, outcome.reconstructed);
  return rec;
}

inline RunSummary summarize(const std::vector<RunRecord> &records) {
  RunSummary s;
  if (records.empty())
    return s;
  for (const auto &r : records) {
    s.trials += static_cast<double>(r.trials);
    s.snr_in += r.snr_in;
    s.snr_in0 += r.snr_in0;
    s.snr_out0 += r.snr_out0;
    s.snr_out += r.snr_out;
    s.consensus += static_cast<double>(r.consensus);
    s.reached_fraction += r.reached_consensus ? 1.0 : 0.0;
  }
  const double count = static_cast<double>(records.size());
  s.trials /= count;
  s.snr_in /= count;
  s.snr_in0 /= count;
  s.snr_out0 /= count;
  s.snr_out /= count;
  s.consensus /= count;
  s.reached_fraction /= count;
  return s;
}

/// Runs every realization of the scenario. Runs are independent and may be
/// spread over `threads` workers; records always come back in run order.
inline ExperimentResult run_experiment(const ExperimentScenario &s, unsigned threads = 0) {
  ExperimentResult result;
  result.scenario = s;
  result.warnings = s.validate();
  result.records.resize(s.runs);

  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, s.runs));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < s.runs; i = next++) {
      try {
        result.records[i] = run_once(s, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);
  result.summary = summarize(result.records);
  return result;
}

/// Per-run rows plus an `avg` row of column means, in the order
/// N_it, SNR_in, SNR_in0, SNR_out0, SNR_out, D.
inline void write_experiment_csv(std::ostream &os, const ExperimentResult &r) {
  using io::format_double;
  os << "run,N_it,SNR_in,SNR_in0,SNR_out0,SNR_out,D,reached_consensus\n";
  for (const auto &rec : r.records)
    os << rec.run_index << ',' << rec.trials << ',' << format_double(rec.snr_in) << ','
       << format_double(rec.snr_in0) << ',' << format_double(rec.snr_out0) << ','
       << format_double(rec.snr_out) << ',' << rec.consensus << ','
       << (rec.reached_consensus ? 1 : 0) << '\n';
  const auto &s = r.summary;
  os << "avg," << format_double(s.trials) << ',' << format_double(s.snr_in) << ','
     << format_double(s.snr_in0) << ',' << format_double(s.snr_out0) << ','
     << format_double(s.snr_out) << ',' << format_double(s.consensus) << ','
     << format_double(s.reached_fraction) << '\n';
}

/// Scenario file: one `key = value` per line, `#` starts a comment.
inline ExperimentScenario parse_scenario(std::istream &is, ExperimentScenario s = {}) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos)
      text = text.substr(0, hash);
    text = io::trim(text);
    if (text.empty())
      continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw io::ParseError(lineno, "expected key = value");
    std::string key(io::trim(text.substr(0, eq)));
    const auto value = io::trim(text.substr(eq + 1));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::erase(key, '_');

    if (key == "n")
      s.n = io::parse_index(value, lineno);
    else if (key == "k")
      s.k = io::parse_index(value, lineno);
    else if (key == "m")
      s.m = io::parse_index(value, lineno);
    else if (key == "i" || key == "outliers")
      s.outliers = io::parse_index(value, lineno);
    else if (key == "sigma")
      s.sigma = io::parse_double(value, lineno);
    else if (key == "offsetreal")
      s.outlier_offset.real(io::parse_double(value, lineno));
    else if (key == "offsetimag")
      s.outlier_offset.imag(io::parse_double(value, lineno));
    else if (key == "cauchyscale")
      s.cauchy_scale = io::parse_double(value, lineno);
    else if (key == "amplow")
      s.amplitude_low = io::parse_double(value, lineno);
    else if (key == "amphigh")
      s.amplitude_high = io::parse_double(value, lineno);
    else if (key == "d") {
      try {
        s.bound = InlierBoundRule::parse(value);
      } catch (const std::exception &e) {
        throw io::ParseError(lineno, e.what());
      }
    } else if (key == "t")
      s.consensus_threshold = value == "auto" ? std::nullopt
                                              : std::optional(io::parse_index(value, lineno));
    else if (key == "nmax")
      s.max_trials = io::parse_index(value, lineno);
    else if (key == "runs")
      s.runs = io::parse_index(value, lineno);
    else if (key == "seed" || key == "masterseed")
      s.seed = io::parse_index(value, lineno);
    else
      throw io::ParseError(lineno, "unknown scenario key '" + key + "'");
  }
  return s;
}

} // namespace rcs

#endif // RCS_EXPERIMENT_HPP
