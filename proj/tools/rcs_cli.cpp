// rcs: denoise signal files, run Monte-Carlo experiments, fabricate test
// data and evaluate the trial-count / SNR predictions.
//
// Exit codes: 0 success, 1 usage or parse error, 2 consensus not reached.

#include "rcs/rcs.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConsensus = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw UsageError("cannot write " + path.string());
  return os;
}

fs::path sibling(const fs::path &base, const std::string &suffix) {
  fs::path p = base;
  p.replace_filename(base.stem().string() + suffix);
  return p;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Scenario flags shared by `experiment` and `generate`.

struct ScenarioFlags {
  std::optional<std::size_t> n, k, m, outliers, nmax, runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma, offset_real, offset_imag, cauchy_scale, amp_low, amp_high;
  std::optional<std::string> d, t;

  void add_to(CLI::App &cmd, bool ransac_flags) {
    cmd.add_option("--n", n, "Signal length N");
    cmd.add_option("--k", k, "Sparsity K");
    cmd.add_option("--i", outliers, "Number of impulsive outliers I");
    cmd.add_option("--sigma", sigma, "Complex deviation of the inlier noise");
    cmd.add_option("--offset-real", offset_real, "Real offset added to every outlier");
    cmd.add_option("--offset-imag", offset_imag, "Imaginary offset added to every outlier");
    cmd.add_option("--cauchy-scale", cauchy_scale, "Scale of the Cauchy impulses");
    cmd.add_option("--amp-low", amp_low, "Lower bound of the component amplitudes");
    cmd.add_option("--amp-high", amp_high, "Upper bound of the component amplitudes");
    cmd.add_option("--seed", seed, "Master seed");
    if (ransac_flags) {
      cmd.add_option("--m", m, "RANSAC subset size M");
      cmd.add_option("--d", d, "Inlier bound: auto (MAD), sigma (2.5 sigma) or a number");
      cmd.add_option("--t", t, "Consensus threshold T, or auto for ceil(3N/4)");
      cmd.add_option("--nmax", nmax, "Maximum number of trials N_max");
      cmd.add_option("--runs", runs, "Number of independent runs");
    }
  }

  rcs::ExperimentScenario apply(rcs::ExperimentScenario s) const {
    if (n) s.n = *n;
    if (k) s.k = *k;
    if (m) s.m = *m;
    if (outliers) s.outliers = *outliers;
    if (nmax) s.max_trials = *nmax;
    if (runs) s.runs = *runs;
    if (seed) s.seed = *seed;
    if (sigma) s.sigma = *sigma;
    if (offset_real) s.outlier_offset.real(*offset_real);
    if (offset_imag) s.outlier_offset.imag(*offset_imag);
    if (cauchy_scale) s.cauchy_scale = *cauchy_scale;
    if (amp_low) s.amplitude_low = *amp_low;
    if (amp_high) s.amplitude_high = *amp_high;
    if (d) s.bound = rcs::InlierBoundRule::parse(*d);
    if (t) {
      if (*t == "auto")
        s.consensus_threshold.reset();
      else
        s.consensus_threshold = rcs::io::parse_index(*t, 0);
    }
    return s;
  }
};

// ---------------------------------------------------------------------------

struct DenoiseArgs {
  std::string input;
  std::size_t k = 5;
  std::size_t m = 32;
  std::optional<double> sigma;
  std::optional<std::string> d;
  std::string t = "auto";
  std::size_t nmax = 100'000;
  std::uint64_t seed = 0;
  std::string out, mask, report;
};

int cmd_denoise(const DenoiseArgs &a) {
  std::ifstream in(a.input);
  if (!in)
    throw UsageError("cannot read " + a.input);
  rcs::ComplexSignal noisy;
  try {
    noisy = rcs::io::read_signal_csv(in);
  } catch (const rcs::io::ParseError &e) {
    throw UsageError(a.input + ": " + e.what());
  }

  rcs::RansacConfig cfg;
  cfg.sparsity = a.k;
  cfg.subset_size = a.m;
  cfg.max_trials = a.nmax;
  cfg.rng_seed = a.seed;
  if (a.t != "auto")
    cfg.consensus_threshold = rcs::io::parse_index(a.t, 0);

  const auto rule = rcs::InlierBoundRule::parse(a.d.value_or(a.sigma ? "sigma" : "auto"));
  std::string bound_source;
  switch (rule.kind) {
  case rcs::InlierBoundRule::Kind::robust: {
    const auto est = rcs::robust_sigma(noisy);
    cfg.inlier_bound = rcs::inlier_bound_from_sigma(est.combined_sigma);
    bound_source = "auto (MAD sigma " + rcs::io::format_double(est.combined_sigma) + " per part)";
    break;
  }
  case rcs::InlierBoundRule::Kind::from_sigma:
    if (!a.sigma)
      throw UsageError("--d sigma needs --sigma");
    cfg.inlier_bound = 2.5 * *a.sigma;
    bound_source = "2.5 * sigma";
    break;
  case rcs::InlierBoundRule::Kind::fixed:
    cfg.inlier_bound = rule.value;
    bound_source = "fixed";
    break;
  }

  const auto outcome = rcs::ransac_denoise(noisy, cfg);

  const fs::path input(a.input);
  const fs::path out = a.out.empty() ? sibling(input, ".denoised.csv") : fs::path(a.out);
  const fs::path mask = a.mask.empty() ? sibling(input, ".mask.csv") : fs::path(a.mask);
  const fs::path report = a.report.empty() ? sibling(input, ".report.txt") : fs::path(a.report);
  {
    auto os = open_output(out);
    rcs::io::write_signal_csv(os, outcome.reconstructed);
  }
  {
    auto os = open_output(mask);
    rcs::io::write_mask_csv(os, noisy.size(), outcome.consensus);
  }
  {
    auto os = open_output(report);
    os << "N = " << noisy.size() << '\n'
       << "K = " << cfg.sparsity << '\n'
       << "M = " << cfg.subset_size << '\n'
       << "d = " << rcs::io::format_double(cfg.inlier_bound) << "  [" << bound_source << "]\n"
       << "T = " << cfg.threshold_for(noisy.size()) << '\n'
       << "N_max = " << cfg.max_trials << '\n'
       << "N_it = " << outcome.trials_used << '\n'
       << "D = " << outcome.consensus.size() << '\n'
       << "reached_consensus = " << (outcome.reached_consensus ? "true" : "false") << '\n';
    for (const auto &w : outcome.warnings)
      os << "warning: " << w << '\n';
  }
  for (const auto &w : outcome.warnings)
    std::cerr << "warning: " << w << '\n';
  std::cout << "N_it = " << outcome.trials_used << ", D = " << outcome.consensus.size()
            << ", consensus " << (outcome.reached_consensus ? "reached" : "NOT reached") << '\n';
  return outcome.reached_consensus ? kExitOk : kExitNoConsensus;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string scenario_file;
  ScenarioFlags flags;
  std::string out;
  std::string plot_dir;
  unsigned threads = 0;
};

void write_plot_files(const fs::path &dir, const rcs::ExperimentResult &r) {
  fs::create_directories(dir);
  auto column = [&](const std::string &name, auto &&value) {
    auto os = open_output(dir / (name + ".csv"));
    os << "run," << name << '\n';
    for (const auto &rec : r.records)
      os << rec.run_index << ',' << value(rec) << '\n';
  };
  using rcs::io::format_double;
  column("N_it", [](const rcs::RunRecord &x) { return std::to_string(x.trials); });
  column("D", [](const rcs::RunRecord &x) { return std::to_string(x.consensus); });
  auto os = open_output(dir / "SNR.csv");
  os << "run,SNR_in,SNR_in0,SNR_out\n";
  for (const auto &rec : r.records)
    os << rec.run_index << ',' << format_double(rec.snr_in) << ',' << format_double(rec.snr_in0)
       << ',' << format_double(rec.snr_out) << '\n';
}

int cmd_experiment(const ExperimentArgs &a) {
  rcs::ExperimentScenario s;
  if (!a.scenario_file.empty()) {
    std::ifstream in(a.scenario_file);
    if (!in)
      throw UsageError("cannot read " + a.scenario_file);
    try {
      s = rcs::parse_scenario(in);
    } catch (const rcs::io::ParseError &e) {
      throw UsageError(a.scenario_file + ": " + e.what());
    }
  }
  s = a.flags.apply(s);
  const auto result = rcs::run_experiment(s, a.threads);
  for (const auto &w : result.warnings)
    std::cerr << "warning: " << w << '\n';

  if (a.out.empty() || a.out == "-") {
    rcs::write_experiment_csv(std::cout, result);
  } else {
    auto os = open_output(a.out);
    rcs::write_experiment_csv(os, result);
  }
  if (!a.plot_dir.empty())
    write_plot_files(a.plot_dir, result);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  ScenarioFlags flags;
  std::string out;
  std::string truth;
};

int cmd_generate(const GenerateArgs &a) {
  rcs::ExperimentScenario s;
  s = a.flags.apply(s);
  const auto r = rcs::make_realization(s, s.seed);
  const fs::path out(a.out);
  const fs::path truth = a.truth.empty() ? sibling(out, ".truth.csv") : fs::path(a.truth);
  {
    auto os = open_output(out);
    rcs::io::write_signal_csv(os, r.noisy);
    if (!os.flush())
      throw UsageError("cannot write " + out.string());
  }
  {
    auto os = open_output(truth);
    rcs::io::write_sidecar_csv(os, r.truth, r.impulses.positions, r.impulses.noise);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PredictArgs {
  std::size_t m = 0, n = 0, i = 0;
  double confidence = 0.99;
  std::optional<double> d;
  std::optional<double> k;
  std::optional<double> snr_in0;
};

int cmd_predict(const PredictArgs &a) {
  std::cout << "M = " << a.m << ", N = " << a.n << ", I = " << a.i << '\n';
  const double p = rcs::clean_subset_probability(a.m, a.n, a.i);
  if (p == 0.0) {
    std::cout << "infeasible: M > N - I, no outlier-free subset of " << a.m << " samples exists\n";
    return kExitOk;
  }
  std::cout << "P(M,N,I) = " << fixed(p, 4) << "  (" << rcs::io::format_double(p) << ")\n";
  std::cout << "N_it = 1/P = " << fixed(1.0 / p, 2) << '\n';
  if (a.i > 0 && a.i < a.n) {
    const double classic = rcs::classic_ransac_trials(a.m, a.n, a.i, a.confidence);
    std::cout << "classic N_it at confidence " << a.confidence << " = " << fixed(classic, 2)
              << "  (valid only when (N-I-M)/(N-M) ~ (N-I)/N)\n";
  }
  if (a.k) {
    const double k = *a.k;
    const double base = a.snr_in0.value_or(0.0);
    const char *unit = a.snr_in0 ? " dB" : " dB gain";
    std::cout << "SNR_out0 = SNR_in0 + 10log(M/K) -> "
              << fixed(rcs::predicted_snr_out(base, static_cast<double>(a.m), k), 2) << unit << '\n';
    if (a.d) {
      std::cout << "SNR_out = SNR_in0 + 10log(D/K) -> "
                << fixed(rcs::predicted_snr_out(base, *a.d, k), 2) << unit << '\n';
      std::cout << "SNR_out - SNR_out0 = 10log(D/M) = "
                << fixed(rcs::snr_improvement_over_subset(*a.d, static_cast<double>(a.m)), 2)
                << " dB\n";
    }
  }
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"RANSAC compressive-sensing denoising of DFT-sparse signals"};
  app.require_subcommand(1);

  DenoiseArgs den;
  auto *denoise = app.add_subcommand("denoise", "Denoise a signal CSV file");
  denoise->add_option("input", den.input, "Signal CSV (index,re,im)")->required();
  denoise->add_option("--k", den.k, "Sparsity K")->capture_default_str();
  denoise->add_option("--m", den.m, "RANSAC subset size M")->capture_default_str();
  denoise->add_option("--sigma", den.sigma, "Known complex deviation of the inlier noise");
  denoise->add_option("--d", den.d, "Inlier bound: auto (MAD), sigma (2.5 sigma) or a number");
  denoise->add_option("--t", den.t, "Consensus threshold T or auto")->capture_default_str();
  denoise->add_option("--nmax", den.nmax, "Maximum number of trials")->capture_default_str();
  denoise->add_option("--seed", den.seed, "RNG seed")->capture_default_str();
  denoise->add_option("--out", den.out, "Denoised signal CSV (default <input>.denoised.csv)");
  denoise->add_option("--mask", den.mask, "Inlier mask CSV (default <input>.mask.csv)");
  denoise->add_option("--report", den.report, "Report file (default <input>.report.txt)");

  ExperimentArgs exp;
  auto *experiment = app.add_subcommand("experiment", "Run a seeded Monte-Carlo experiment");
  experiment->add_option("--scenario", exp.scenario_file, "key=value scenario file");
  exp.flags.add_to(*experiment, true);
  experiment->add_option("--out", exp.out, "Experiment CSV (default stdout)");
  experiment->add_option("--emit-plot", exp.plot_dir, "Directory for per-run scatter data");
  experiment->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");

  GenerateArgs gen;
  auto *generate = app.add_subcommand("generate", "Write a synthetic noisy signal and its truth");
  gen.flags.add_to(*generate, false);
  generate->add_option("--out", gen.out, "Signal CSV to write")->required();
  generate->add_option("--truth", gen.truth, "Sidecar CSV (default <out>.truth.csv)");

  PredictArgs pred;
  auto *predict = app.add_subcommand("predict", "Clean-subset probability and SNR predictions");
  predict->add_option("M", pred.m, "Subset size")->required();
  predict->add_option("N", pred.n, "Signal length")->required();
  predict->add_option("I", pred.i, "Number of outliers")->required();
  predict->add_option("--confidence", pred.confidence, "Confidence for the classic formula")
      ->capture_default_str();
  predict->add_option("--d", pred.d, "Consensus size D for the SNR formulas");
  predict->add_option("--k", pred.k, "Sparsity K for the SNR formulas");
  predict->add_option("--snr-in0", pred.snr_in0, "Input SNR (dB) to add the gains to");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*denoise)
      return cmd_denoise(den);
    if (*experiment)
      return cmd_experiment(exp);
    if (*generate)
      return cmd_generate(gen);
    if (*predict)
      return cmd_predict(pred);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
