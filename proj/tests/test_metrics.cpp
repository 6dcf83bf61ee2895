#include <catch2/catch_amalgamated.hpp>

#include "rcs/metrics.hpp"
#include "rcs/random.hpp"
#include "test_support.hpp"

#include <numeric>

using namespace rcs;

namespace {

// Independent oracle: C(N-I, M) / C(N, M) through log-gamma.
double hypergeometric_clean(double m, double n, double i) {
  return std::exp(std::lgamma(n - i + 1) - std::lgamma(n - i - m + 1) - std::lgamma(n + 1) +
                  std::lgamma(n - m + 1));
}

} // namespace

TEST_CASE("snr of identical signals is infinite", "[snr]") {
  std::mt19937_64 rng(1);
  const ComplexSignal x(test::random_complex(64, rng));
  CHECK(is_infinite_snr(snr_db(x, x)));
}

TEST_CASE("snr of a zero estimate is 0 dB", "[snr]") {
  std::mt19937_64 rng(2);
  const ComplexSignal x(test::random_complex(64, rng));
  CHECK(snr_db(x, ComplexSignal(std::vector<cplx>(64))) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("snr of a 100:1 energy ratio is 20 dB", "[snr]") {
  std::vector<cplx> ref(4, cplx{5.0, 0.0});
  std::vector<cplx> est = ref;
  est[0] += cplx{0.0, 1.0}; // error energy 1, signal energy 100
  CHECK(snr_db(ComplexSignal(ref), ComplexSignal(est)) == Catch::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("snr argument checks", "[snr][errors]") {
  const ComplexSignal z(std::vector<cplx>(8));
  const ComplexSignal one(std::vector<cplx>(8, cplx{1.0, 0.0}));
  CHECK_THROWS_AS(snr_db(z, one), InvalidArgument);
  CHECK_THROWS_AS(snr_db(one, ComplexSignal(std::vector<cplx>(7))), DimensionMismatch);
}

TEST_CASE("snr is the same in time and frequency", "[snr][property]") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {16u, 100u, 128u}) {
    const ComplexSignal x(test::random_complex(n, rng));
    const auto xh = x + ComplexSignal(test::random_complex(n, rng, 0.1));
    CHECK(snr_db(dft(x), dft(xh)) == Catch::Approx(snr_db(x, xh)).margin(1e-9));
  }
}

TEST_CASE("clean subset probability for the tabulated cases", "[probability]") {
  const double p8 = clean_subset_probability(32, 128, 8);
  CHECK(p8 == Catch::Approx(0.0927).margin(5e-5));
  CHECK(1.0 / p8 == Catch::Approx(10.78).margin(0.01));
  CHECK(expected_trials(32, 128, 8) == Catch::Approx(1.0 / p8));

  const double p16 = clean_subset_probability(32, 128, 16);
  CHECK(p16 == Catch::Approx(0.0071).margin(5e-5));
  CHECK(1.0 / p16 == Catch::Approx(140.95).margin(0.05));
}

TEST_CASE("clean subset probability edge cases", "[probability]") {
  CHECK(clean_subset_probability(32, 128, 0) == 1.0);
  CHECK(clean_subset_probability(32, 128, 97) == 0.0);
  CHECK(clean_subset_probability(32, 128, 96) > 0.0);
  CHECK_THROWS_AS(expected_trials(32, 128, 97), Infeasible);
  CHECK_THROWS_AS(clean_subset_probability(0, 128, 1), InvalidArgument);
  CHECK_THROWS_AS(clean_subset_probability(129, 128, 1), InvalidArgument);
  CHECK_THROWS_AS(clean_subset_probability(4, 128, 129), InvalidArgument);
  CHECK(clean_subset_probability(1, 10, 3) == Catch::Approx(0.7));
}

TEST_CASE("clean subset probability matches the hypergeometric oracle", "[probability][oracle]") {
  for (std::size_t n : {16u, 64u, 128u, 256u})
    for (std::size_t m : {1u, 4u, 10u})
      for (std::size_t i = 0; i + m <= n; i += 3) {
        INFO("N=" << n << " M=" << m << " I=" << i);
        CHECK(clean_subset_probability(m, n, i) ==
              Catch::Approx(hypergeometric_clean(double(m), double(n), double(i))).epsilon(1e-9));
      }
}

TEST_CASE("classic trial count and the independence approximation", "[probability]") {
  CHECK(classic_ransac_trials(32, 128, 8, 0.99) == Catch::Approx(33.9).margin(0.1));
  CHECK(classic_ransac_trials(32, 128, 0, 0.99) == 0.0);
  // Without replacement is strictly worse than the with-replacement bound.
  CHECK(clean_subset_probability(32, 128, 8) < std::pow(120.0 / 128.0, 32));
  CHECK(std::pow(120.0 / 128.0, 32) == Catch::Approx(0.126789).margin(1e-6));
  CHECK_THROWS_AS(classic_ransac_trials(32, 128, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(classic_ransac_trials(32, 128, 128, 0.5), InvalidArgument);
}

TEST_CASE("clean subset probability vanishes as I approaches N - M", "[probability][property]") {
  double prev = 1.0;
  for (std::size_t i = 0; i <= 96; ++i) {
    const double p = clean_subset_probability(32, 128, i);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK(clean_subset_probability(32, 128, 96) < 1e-25);
}

TEST_CASE("clean subset probability is monotone in M and I", "[probability][property]") {
  for (std::size_t m = 1; m < 60; ++m)
    for (std::size_t i = 0; i < 40; ++i) {
      CHECK(clean_subset_probability(m + 1, 128, i) <= clean_subset_probability(m, 128, i));
      CHECK(clean_subset_probability(m, 128, i + 1) <= clean_subset_probability(m, 128, i));
    }
}

TEST_CASE("clean subset probability agrees with simulation", "[probability][statistical]") {
  Rng rng(4);
  const std::size_t draws = 100'000;
  for (std::size_t outliers : {8u, 16u}) {
    std::size_t clean = 0;
    for (std::size_t d = 0; d < draws; ++d) {
      const auto s = random_subset(128, 32, rng);
      clean += std::all_of(s.begin(), s.end(), [&](std::size_t v) { return v >= outliers; });
    }
    const double p = clean_subset_probability(32, 128, outliers);
    const double se = std::sqrt(p * (1.0 - p) / double(draws));
    INFO("I=" << outliers << " observed " << double(clean) / draws);
    CHECK(std::abs(double(clean) / double(draws) - p) <= 3.0 * se);
  }
}

TEST_CASE("snr gain formulas", "[prediction]") {
  CHECK(predicted_snr_out(0.0, 119.0, 5.0) == Catch::Approx(13.77).margin(0.005));
  CHECK(snr_improvement_over_subset(119.0, 32.0) == Catch::Approx(5.70).margin(0.005));
  CHECK(predicted_snr_out(0.0, 32.0, 5.0) == Catch::Approx(8.06).margin(0.005));
  CHECK(predicted_snr_out(7.0, 5.0, 5.0) == Catch::Approx(7.0));
  CHECK(snr_improvement_over_subset(111.0, 32.0) == Catch::Approx(5.40).margin(0.01));
  CHECK(snr_improvement_over_subset(64.0, 32.0) == Catch::Approx(3.01).margin(0.005));
  CHECK_THROWS_AS(predicted_snr_out(0.0, 4.0, 5.0), InvalidArgument);
  CHECK_THROWS_AS(predicted_snr_out(0.0, 4.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(snr_improvement_over_subset(0.0, 32.0), InvalidArgument);
}

TEST_CASE("subset gain plus consensus gain is the full gain", "[prediction][property]") {
  for (double d = 5; d <= 256; d += 7)
    for (double m : {5.0, 16.0, 32.0, 64.0}) {
      if (m > d)
        continue;
      const double total = predicted_snr_out(0.0, d, 5.0);
      const double split = predicted_snr_out(0.0, m, 5.0) + snr_improvement_over_subset(d, m);
      CHECK(total == Catch::Approx(split).margin(1e-12));
    }
}
