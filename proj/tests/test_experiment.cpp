#include <catch2/catch_amalgamated.hpp>

#include "rcs/experiment.hpp"
#include "rcs/io.hpp"
#include "test_support.hpp"

#include <sstream>

using namespace rcs;

namespace {

std::string experiment_csv(const ExperimentScenario &s, unsigned threads) {
  std::ostringstream os;
  write_experiment_csv(os, run_experiment(s, threads));
  return os.str();
}

ExperimentScenario small_scenario() {
  ExperimentScenario s;
  s.outliers = 8;
  s.runs = 6;
  s.seed = 7;
  return s;
}

std::size_t parse_error_line(const std::string &text) {
  std::istringstream is(text);
  try {
    (void)io::read_signal_csv(is);
  } catch (const io::ParseError &e) {
    return e.line();
  }
  return std::size_t(-1);
}

} // namespace

TEST_CASE("signal csv round trip is exact", "[io]") {
  std::mt19937_64 rng(1);
  auto v = test::random_complex(100, rng, 1e3);
  v[3] = cplx{1e-300, -0.0};
  v[4] = cplx{0.1, 1.0 / 3.0};
  const ComplexSignal x(v);
  std::ostringstream os;
  io::write_signal_csv(os, x);
  CHECK(os.str().rfind("index,re,im\n0,", 0) == 0);
  std::istringstream is(os.str());
  CHECK(io::read_signal_csv(is) == x);
}

TEST_CASE("malformed signal files report the line", "[io][errors]") {
  CHECK(parse_error_line("index,re,im\n0,1,2\n1,abc,0\n") == 3);
  CHECK(parse_error_line("index,re,im\n0,1,2\n2,1,0\n") == 3);
  CHECK(parse_error_line("index,re,im\n0,1\n") == 2);
  CHECK(parse_error_line("n,re,im\n0,1,2\n") == 1);
  CHECK(parse_error_line("index,re,im\n") == 1);
  CHECK(parse_error_line("") == 0);
  std::istringstream spaced("index, re, im\n\n0, +1.5 ,-2\r\n");
  const auto x = io::read_signal_csv(spaced);
  REQUIRE(x.size() == 1);
  CHECK(x[0] == cplx{1.5, -2.0});
}

TEST_CASE("format_double is shortest round trip", "[io]") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(kInfiniteSnr) == "inf");
  CHECK(io::format_double(-kInfiniteSnr) == "-inf");
  CHECK(io::parse_double(io::format_double(0.1 + 0.2), 1) == 0.1 + 0.2);
  CHECK(io::parse_double("inf", 1) == kInfiniteSnr);
  CHECK_THROWS_AS(io::parse_index("-3", 4), io::ParseError);
}

TEST_CASE("ground truth sidecar round trip", "[io]") {
  ExperimentScenario s;
  s.outlier_offset = {100.0, 0.0};
  const auto r = make_realization(s, 99);
  std::ostringstream os;
  io::write_sidecar_csv(os, r.truth, r.impulses.positions, r.impulses.noise);
  std::istringstream is(os.str());
  const auto t = io::read_sidecar_csv(is, s.n);
  CHECK(t.spectrum.lines() == r.truth.lines());
  CHECK(t.outliers == r.impulses.positions);
  REQUIRE(t.outlier_values.size() == s.outliers);
  for (std::size_t i = 0; i < t.outliers.size(); ++i)
    CHECK(t.outlier_values[i] == r.impulses.noise[t.outliers[i]]);

  std::istringstream bad("kind,index,re,im\nspectrum,3,1,0\nbogus,1,0,0\n");
  try {
    (void)io::read_sidecar_csv(bad, 8);
    FAIL("expected ParseError");
  } catch (const io::ParseError &e) {
    CHECK(e.line() == 3);
  }
  std::istringstream out_of_range("kind,index,re,im\nspectrum,9,1,0\n");
  CHECK_THROWS_AS(io::read_sidecar_csv(out_of_range, 8), io::ParseError);
}

TEST_CASE("mask csv round trip", "[io]") {
  const std::vector<std::size_t> inliers{0, 2, 3};
  std::ostringstream os;
  io::write_mask_csv(os, 5, inliers);
  CHECK(os.str() == "index,inlier\n0,1\n1,0\n2,1\n3,1\n4,0\n");
  std::istringstream is(os.str());
  CHECK(io::read_mask_csv(is) == std::vector<int>{1, 0, 1, 1, 0});
}

TEST_CASE("realizations decompose into clean, inlier and impulse parts", "[experiment]") {
  ExperimentScenario s;
  s.outlier_offset = {100.0, 0.0};
  const auto r = make_realization(s, 5);
  CHECK(r.impulses.positions.size() == s.outliers);
  const auto diff = r.noisy - r.inlier_noisy;
  for (std::size_t n = 0; n < s.n; ++n) {
    const bool planted = std::binary_search(r.impulses.positions.begin(), r.impulses.positions.end(), n);
    CHECK((diff[n] != cplx{}) == planted);
  }
  const auto again = make_realization(s, 5);
  CHECK(again.noisy == r.noisy);
  CHECK(make_realization(s, 6).noisy != r.noisy);
}

TEST_CASE("complex sigma sets the inlier SNR", "[experiment][statistical]") {
  // K unit tones carry energy K per sample; E|eps|^2 = sigma^2.
  ExperimentScenario s;
  s.outliers = 0;
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = make_realization(s, seed);
    sum += snr_db(r.clean, r.inlier_noisy);
  }
  CHECK(sum / 200.0 == Catch::Approx(10.0 * std::log10(5.0 / 0.25)).margin(0.15));
}

TEST_CASE("inlier bound rules", "[experiment]") {
  CHECK(InlierBoundRule::parse("auto").kind == InlierBoundRule::Kind::robust);
  CHECK(InlierBoundRule::parse("sigma").kind == InlierBoundRule::Kind::from_sigma);
  const auto fixed = InlierBoundRule::parse("1e-6");
  CHECK(fixed.kind == InlierBoundRule::Kind::fixed);
  CHECK(fixed.value == 1e-6);
  CHECK(fixed.str() == "1e-06");
  CHECK(InlierBoundRule::parse("auto").str() == "auto");
  CHECK_THROWS(InlierBoundRule::parse("-1"));
  CHECK_THROWS(InlierBoundRule::parse("often"));

  ExperimentScenario s;
  s.sigma = 0.5;
  const ComplexSignal x(std::vector<cplx>(8, cplx{1.0, 0.0}));
  CHECK(resolve_inlier_bound(InlierBoundRule::parse("sigma"), s, x) == Catch::Approx(1.25));
  CHECK(resolve_inlier_bound(fixed, s, x) == 1e-6);
}

TEST_CASE("scenario files", "[experiment][io]") {
  std::istringstream is("# wide case\nN = 256\nM=64\nK = 12\nI = 40 # outliers\n"
                        "sigma=0.5\noffset_real = 100\nd = 1e-6\nT = 200\nN_max = 500\nruns=3\n"
                        "master_seed=9\n");
  const auto s = parse_scenario(is);
  CHECK(s.n == 256);
  CHECK(s.m == 64);
  CHECK(s.k == 12);
  CHECK(s.outliers == 40);
  CHECK(s.outlier_offset == cplx{100.0, 0.0});
  CHECK(s.bound.kind == InlierBoundRule::Kind::fixed);
  CHECK(s.consensus_threshold == std::optional<std::size_t>(200));
  CHECK(s.max_trials == 500);
  CHECK(s.runs == 3);
  CHECK(s.seed == 9);

  std::istringstream unknown("n = 64\nwidth = 3\n");
  try {
    (void)parse_scenario(unknown);
    FAIL("expected ParseError");
  } catch (const io::ParseError &e) {
    CHECK(e.line() == 2);
  }
  std::istringstream no_eq("n 64\n");
  CHECK_THROWS_AS(parse_scenario(no_eq), io::ParseError);
}

TEST_CASE("scenario validation", "[experiment][errors]") {
  ExperimentScenario s;
  CHECK(s.validate().empty());
  s.outliers = 100;
  const auto w = s.validate();
  CHECK(w.size() == 2);
  s.outliers = 200;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = {};
  s.k = 40;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = {};
  s.runs = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = {};
  s.k = 8;
  CHECK(s.validate().size() == 1); // K > M/5
}

TEST_CASE("experiment output layout and summary row", "[experiment][io]") {
  const auto csv = experiment_csv(small_scenario(), 1);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "run,N_it,SNR_in,SNR_in0,SNR_out0,SNR_out,D,reached_consensus");

  std::vector<std::vector<double>> rows;
  std::vector<double> avg;
  while (std::getline(is, line)) {
    const auto f = io::split_csv(line);
    REQUIRE(f.size() == 8);
    std::vector<double> vals;
    for (std::size_t i = 1; i < f.size(); ++i)
      vals.push_back(io::parse_double(f[i], 0));
    if (f[0] == "avg")
      avg = vals;
    else {
      CHECK(io::parse_index(f[0], 0) == rows.size());
      rows.push_back(vals);
    }
  }
  REQUIRE(rows.size() == 6);
  REQUIRE(avg.size() == 7);
  for (std::size_t c = 0; c < 7; ++c) {
    double mean = 0.0;
    for (const auto &r : rows)
      mean += r[c];
    mean /= double(rows.size());
    CHECK(avg[c] == Catch::Approx(mean).margin(1e-9));
  }
}

TEST_CASE("experiments are deterministic and thread-count independent", "[experiment][property]") {
  const auto s = small_scenario();
  const auto a = experiment_csv(s, 1);
  CHECK(a == experiment_csv(s, 1));
  CHECK(a == experiment_csv(s, 3));
  auto other = s;
  other.seed = 8;
  CHECK(a != experiment_csv(other, 1));
}

TEST_CASE("runs are independent of each other", "[experiment][property]") {
  auto s = small_scenario();
  const auto all = run_experiment(s, 1);
  for (std::size_t i = 0; i < s.runs; ++i) {
    const auto one = run_once(s, i);
    CHECK(one.trials == all.records[i].trials);
    CHECK(one.snr_out == all.records[i].snr_out);
  }
  s.runs = 2;
  CHECK(run_experiment(s, 1).records[1].snr_out == all.records[1].snr_out);
}

TEST_CASE("noiseless runs recover the signal exactly", "[experiment]") {
  ExperimentScenario s;
  s.sigma = 0.0;
  s.outliers = 0;
  s.bound = InlierBoundRule::parse("1e-6");
  s.runs = 4;
  const auto r = run_experiment(s, 1);
  for (const auto &rec : r.records) {
    CHECK(rec.trials == 1);
    CHECK(rec.consensus == s.n);
    CHECK(is_infinite_snr(rec.snr_in));
    CHECK(rec.snr_out >= 250.0);
  }
}
