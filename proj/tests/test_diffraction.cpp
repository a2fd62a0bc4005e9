#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "popper/diffraction.hpp"
#include "popper/kinematics.hpp"
#include "popper/rng.hpp"

using namespace popper;

namespace {

const DiffractionGeometry kDefault{0.16e-3, 702.2e-9, 0.5};

// Independent oracle: adaptive Gauss-Kronrod on the raw sinc^2 in beta.
double sinc2(double b) {
  if (b == 0.0) return 1.0;
  const double s = std::sin(b) / b;
  return s * s;
}

double sinc2_integral(double b0, double b1) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(sinc2, b0, b1, 15, 1e-14);
}

} // namespace

TEST_CASE("relative_intensity") {
  CHECK(relative_intensity(kDefault, 0.0) == 1.0);
  const double y1 = first_minimum(kDefault);
  CHECK(relative_intensity(kDefault, y1) < 1e-30);
  CHECK(relative_intensity(kDefault, 1.5 * y1) == doctest::Approx(std::pow(2.0 / (3.0 * std::numbers::pi), 2)).epsilon(1e-12));
  CHECK(relative_intensity(kDefault, 1.5 * y1) == doctest::Approx(0.045032).epsilon(1e-5));
  // Series branch joins the direct formula smoothly.
  const double y_small = 0.9e-4 * kDefault.wavelength * kDefault.screen_distance / (std::numbers::pi * kDefault.slit_width);
  CHECK(relative_intensity(kDefault, y_small) == doctest::Approx(sinc2(kDefault.beta(y_small))).epsilon(1e-15));
  CHECK(relative_intensity(kDefault, 1.1 * y_small) == doctest::Approx(sinc2(kDefault.beta(1.1 * y_small))).epsilon(1e-15));
}

TEST_CASE("relative_intensity is even with zeros at multiples of the first minimum") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-20e-3, 20e-3);
  for (int i = 0; i < 5000; ++i) {
    const double y = u(gen);
    const double v = relative_intensity(kDefault, y);
    REQUIRE(v == relative_intensity(kDefault, -y));
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
  const double y1 = first_minimum(kDefault);
  for (int k = 1; k <= 8; ++k) {
    CHECK(relative_intensity(kDefault, k * y1) < 1e-28);
    CHECK(relative_intensity(kDefault, -k * y1) < 1e-28);
  }
}

TEST_CASE("first_minimum") {
  CHECK(first_minimum(kDefault) == doctest::Approx(2.194375e-3).epsilon(1e-14));
  auto wide = kDefault;
  wide.slit_width *= 2.0;
  CHECK(first_minimum(wide) == doctest::Approx(0.5 * first_minimum(kDefault)).epsilon(1e-15));
  auto far = kDefault;
  far.screen_distance = 1.245;
  CHECK(first_minimum(far) == doctest::Approx(5.46399375e-3).epsilon(1e-14));
  CHECK_THROWS_AS(first_minimum(DiffractionGeometry{0.0, 1e-7, 1.0}), std::invalid_argument);
}

TEST_CASE("uncertainty_form") {
  const double p = momentum_of(kDefault.wavelength);
  const double form = uncertainty_form(kDefault, p);
  const double h = kReferenceConstants.h;
  CHECK(form == doctest::Approx(h * kDefault.screen_distance / kDefault.slit_width).epsilon(1e-14));
  CHECK(form * kDefault.slit_width / kDefault.screen_distance == doctest::Approx(h).epsilon(1e-14));
  CHECK(form == first_minimum(kDefault) * p);
  auto twice = kDefault;
  twice.screen_distance *= 2.0;
  CHECK(uncertainty_form(twice, p) == doctest::Approx(2.0 * form).epsilon(1e-15));
  CHECK_THROWS(uncertainty_form(kDefault, 0.0));
}

TEST_CASE("path_length") {
  CHECK(path_length(500.0, 2.2) == doctest::Approx(500.00484).epsilon(1e-8));
  CHECK(path_length(0.5, 0.0) == 0.5);
  CHECK(path_length(3.0, 4.0) == 5.0);
  CHECK_THROWS(path_length(-1.0, 0.0));
}

TEST_CASE("paraxial check") {
  CHECK(kDefault.paraxial());
  CHECK_FALSE(DiffractionGeometry{1e-6, 1e-6, 1.0}.paraxial());
}

TEST_CASE("sampler construction") {
  CHECK_THROWS_AS(build_sampler(kDefault, 0, 8192), std::invalid_argument);
  CHECK_THROWS_AS(build_sampler(kDefault, 5, 1000), std::invalid_argument);
  CHECK_THROWS_AS(build_sampler(DiffractionGeometry{-1.0, 1e-7, 1.0}), std::invalid_argument);

  const auto s = build_sampler(kDefault);
  const double L = 5.0 * first_minimum(kDefault);
  CHECK(s.half_window() == doctest::Approx(L).epsilon(1e-15));
  CHECK(s.cdf(-L) == 0.0);
  CHECK(s.cdf(L) == 1.0);
  CHECK(s.cdf(0.0) == 0.5);
  const auto& c = s.cdf_table();
  for (std::size_t i = 1; i < c.size(); ++i) REQUIRE(c[i] > c[i - 1]);
  for (std::size_t i = 0; i < c.size(); ++i) REQUIRE(c[i] + c[c.size() - 1 - i] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sampler central-lobe mass against quadrature oracle") {
  // Oracle for 5 lobes: integral over [0, pi] / integral over [0, 5 pi] = 0.921459 (mpmath).
  double total = 0.0;
  for (int k = 0; k < 5; ++k) total += sinc2_integral(k * std::numbers::pi, (k + 1) * std::numbers::pi);
  const double oracle = sinc2_integral(0.0, std::numbers::pi) / total;
  CHECK(oracle == doctest::Approx(0.921459).epsilon(1e-6));
  // The untruncated central-lobe fraction is the familiar 0.9028.
  CHECK(sinc2_integral(0.0, std::numbers::pi) / (std::numbers::pi / 2.0) == doctest::Approx(0.902823).epsilon(1e-6));

  const auto s = build_sampler(kDefault, 5, 8192);
  const double y1 = first_minimum(kDefault);
  CHECK(s.cdf(y1) - s.cdf(-y1) == doctest::Approx(oracle).epsilon(1e-7));
  // Every lobe boundary, not just the first.
  for (int k = 1; k <= 4; ++k) {
    double inner = 0.0;
    for (int j = 0; j < k; ++j) inner += sinc2_integral(j * std::numbers::pi, (j + 1) * std::numbers::pi);
    CHECK(s.cdf(k * y1) - 0.5 == doctest::Approx(0.5 * inner / total).epsilon(1e-7));
  }
}

TEST_CASE("sample_deflection symmetry and determinism") {
  const auto s = build_sampler(kDefault);
  CHECK(sample_deflection(s, 0.5) == 0.0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(gen);
    const double a = sample_deflection(s, x);
    REQUIRE(a == sample_deflection(s, x));
    REQUIRE(std::abs(a + sample_deflection(s, 1.0 - x)) < 1e-12 * s.half_window());
    REQUIRE(std::abs(a) <= s.half_window());
  }
  CHECK(s.sample_angle(0.75) == doctest::Approx(s.sample(0.75) / kDefault.screen_distance));
}

TEST_CASE("sampler draws follow the single-slit intensity") {
  const auto s = build_sampler(kDefault);
  const double L = s.half_window();
  constexpr std::size_t kBins = 64;
  constexpr std::size_t kDraws = 1'000'000;
  std::vector<double> observed(kBins, 0.0);
  RandomStream rs(0x5eed);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double y = sample_deflection(s, rs.uniform());
    sum += y;
    sum2 += y * y;
    auto b = static_cast<std::size_t>((y + L) / (2.0 * L) * kBins);
    observed[std::min(b, kBins - 1)] += 1.0;
  }
  // Expected from the oracle integral over each bin.
  const double scale = std::numbers::pi * kDefault.slit_width / (kDefault.wavelength * kDefault.screen_distance);
  std::vector<double> expected(kBins);
  double norm = 0.0;
  for (std::size_t b = 0; b < kBins; ++b) {
    const double y0 = -L + 2.0 * L * b / kBins;
    const double y1 = -L + 2.0 * L * (b + 1) / kBins;
    expected[b] = sinc2_integral(scale * y0, scale * y1);
    norm += expected[b];
  }
  double chi2 = 0.0;
  for (std::size_t b = 0; b < kBins; ++b) {
    const double e = kDraws * expected[b] / norm;
    chi2 += (observed[b] - e) * (observed[b] - e) / e;
  }
  const boost::math::chi_squared_distribution<double> dist(kBins - 1);
  const double p = boost::math::cdf(boost::math::complement(dist, chi2));
  CHECK(p > 0.01);

  const double mean = sum / kDraws;
  const double sd = std::sqrt(sum2 / kDraws - mean * mean);
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(double(kDraws)));
}
