#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "revival/eigenbasis.hpp"
#include "revival/error.hpp"

namespace {

using namespace revival;
using Big = boost::multiprecision::cpp_bin_float_50;
using boost::math::quadrature::gauss_kronrod;

// Hermite function built from the physicists' polynomial with exact
// recurrence H_{k+1} = 2 x H_k - 2 k H_{k-1} in 50-digit arithmetic.
double hermite_function_oracle(int n, double x) {
  const Big xi(x);
  Big prev = 1;
  Big cur = 2 * xi;
  if (n == 0) cur = 1;
  for (int k = 1; k < n; ++k) {
    Big next = 2 * xi * cur - 2 * k * prev;
    prev = cur;
    cur = next;
  }
  const Big norm = boost::multiprecision::sqrt(boost::multiprecision::pow(Big(2), n) *
                                                boost::math::factorial<Big>(static_cast<unsigned>(n)) *
                                                boost::multiprecision::sqrt(boost::math::constants::pi<Big>()));
  return static_cast<double>(cur * boost::multiprecision::exp(-xi * xi / 2) / norm);
}

TEST(Sho, Examples) {
  EXPECT_NEAR(eval_sho(0, 1.0, 0.0), std::pow(M_PI, -0.25), 1e-15);
  EXPECT_NEAR(eval_sho(0, 1.0, 0.0), 0.7511, 5e-5);
  EXPECT_EQ(eval_sho(1, 1.0, 0.0), 0.0);
  const double norm = gauss_kronrod<double, 61>::integrate(
      [](double x) {
        const double v = eval_sho(15, 1.0, x);
        return v * v;
      },
      -12.0, 12.0, 15, 1e-14);
  EXPECT_NEAR(norm, 1.0, 1e-8);
}

TEST(Sho, RecurrenceMatchesMultiprecisionHermite) {
  for (int n : {0, 1, 2, 7, 25, 50}) {
    for (double x : {0.0, 1.0, 5.0, -3.3}) {
      const double expected = hermite_function_oracle(n, x);
      const double got = eval_sho(n, 1.0, x);
      if (expected == 0.0) {
        EXPECT_NEAR(got, 0.0, 1e-15);
      } else {
        EXPECT_NEAR(got / expected, 1.0, 1e-8) << "n=" << n << " x=" << x;
      }
    }
  }
}

TEST(Sho, FrequencyScaling) {
  // psi_n(x; omega) = omega^(1/4) psi_n(sqrt(omega) x; 1).
  for (double omega : {0.25, 2.0}) {
    for (double x : {-1.0, 0.3, 2.0}) {
      EXPECT_NEAR(eval_sho(6, omega, x), std::pow(omega, 0.25) * eval_sho(6, 1.0, std::sqrt(omega) * x), 1e-13);
    }
  }
}

TEST(Sho, AllLevelsAgreeWithSingleLevel) {
  std::vector<double> all(40);
  eval_sho_all(1.3, 0.7, all);
  for (int n = 0; n < 40; ++n) EXPECT_DOUBLE_EQ(all[static_cast<std::size_t>(n)], eval_sho(n, 1.3, 0.7));
}

TEST(Sho, LargeArgumentsStayFinite) {
  for (int n : {0, 30, 200}) {
    for (double x : {-40.0, 15.0, 40.0}) EXPECT_TRUE(std::isfinite(eval_sho(n, 1.0, x)));
  }
}

TEST(Sho, OrthonormalOnTrapezoidGrid) {
  const int points = 2401;
  const double a = -12.0, b = 12.0, h = (b - a) / (points - 1);
  std::vector<std::vector<double>> psi(points, std::vector<double>(26));
  for (int i = 0; i < points; ++i) eval_sho_all(1.0, a + i * h, psi[static_cast<std::size_t>(i)]);
  for (int m = 0; m <= 25; ++m) {
    for (int n = m; n <= 25; ++n) {
      double s = 0.0;
      for (int i = 0; i < points; ++i) {
        const double w = (i == 0 || i == points - 1) ? 0.5 * h : h;
        s += w * psi[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] *
             psi[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
      }
      EXPECT_NEAR(s, m == n ? 1.0 : 0.0, 1e-6) << m << "," << n;
    }
  }
}

TEST(Box, Examples) {
  EXPECT_NEAR(eval_box(1, 1.0, 0.5), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eval_box(15, 1.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(eval_box(2, 1.0, 0.25), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eval_box(15, 1.0, 1.0), 0.0, 1e-13);
}

TEST(Box, OutsideWellIsRejected) {
  EXPECT_THROW(eval_box(1, 1.0, -1e-9), DomainError);
  EXPECT_THROW(eval_box(1, 1.0, 1.0 + 1e-9), DomainError);
  EXPECT_THROW(eval_box(0, 1.0, 0.5), DomainError);
}

TEST(Box, OrthonormalOverScenarioWindow) {
  for (int m = 4; m <= 26; ++m) {
    for (int n = m; n <= 26; ++n) {
      const double s = gauss_kronrod<double, 61>::integrate(
          [&](double x) { return eval_box(m, 2.0, x) * eval_box(n, 2.0, x); }, 0.0, 2.0, 10, 1e-13);
      EXPECT_NEAR(s, m == n ? 1.0 : 0.0, 1e-6) << m << "," << n;
    }
  }
}

TEST(Rotator, Examples) {
  const double amp = 1.0 / std::sqrt(2.0 * M_PI);
  EXPECT_NEAR(std::abs(eval_rotator(0, 1.3) - std::complex<double>(amp)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_rotator(15, 0.0) - std::complex<double>(amp)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_rotator(15, 2.0 * M_PI / 15.0) - std::complex<double>(amp)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eval_rotator(-7, 2.1)), amp, 1e-15);
}

TEST(Rotator, OrthonormalOnUniformGrid) {
  const int points = 1024;
  for (int m = 4; m <= 26; ++m) {
    for (int n = 4; n <= 26; ++n) {
      std::complex<double> s = 0.0;
      for (int i = 0; i < points; ++i) {
        const double phi = 2.0 * M_PI * i / points;
        s += std::conj(eval_rotator(m, phi)) * eval_rotator(n, phi);
      }
      s *= 2.0 * M_PI / points;
      EXPECT_NEAR(std::abs(s - (m == n ? 1.0 : 0.0)), 0.0, 1e-6);
    }
  }
}

// Direct closed form for small n, with factorials in double.
std::complex<double> circular_direct(int n, double r, double theta, double phi) {
  const int l = n - 1;
  const double radial_norm =
      1.0 / std::sqrt(boost::math::factorial<double>(2u * n) * std::pow(n / 2.0, 2 * n + 1));
  const double angular_norm = std::sqrt(boost::math::factorial<double>(2u * l + 1u) / (4.0 * M_PI)) /
                              (std::pow(2.0, l) * boost::math::factorial<double>(static_cast<unsigned>(l)));
  const double mag = radial_norm * angular_norm * std::pow(r, l) * std::exp(-r / n) * std::pow(std::sin(theta), l);
  return std::polar(1.0, l * phi) * mag;
}

TEST(Circular, GroundState) {
  for (double r : {0.1, 1.0, 3.0}) {
    const auto v = eval_circular(1, r, 0.4, 2.0);
    EXPECT_NEAR(v.real(), std::exp(-r) / std::sqrt(M_PI), 1e-15);
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(Circular, LogDomainMatchesDirectForSmallN) {
  for (int n = 1; n <= 10; ++n) {
    for (double r : {0.5, 3.0, 1.0 * n * n, 60.0}) {
      for (double theta : {0.3, M_PI / 2.0, 2.5}) {
        for (double phi : {0.0, 1.1, 5.9}) {
          const auto expected = circular_direct(n, r, theta, phi);
          const auto got = eval_circular(n, r, theta, phi);
          EXPECT_LE(std::abs(got - expected), 1e-10 * std::abs(expected)) << n << " " << r << " " << theta;
        }
      }
    }
  }
}

TEST(Circular, LogOffsetRescales) {
  const auto a = eval_circular(4, 5.0, 1.0, 0.5);
  const auto b = eval_circular(4, 5.0, 1.0, 0.5, 3.0);
  EXPECT_NEAR(std::abs(b) / std::abs(a), std::exp(-3.0), 1e-14);
}

TEST(Circular, NonPositiveRadiusIsRejected) {
  EXPECT_THROW(eval_circular(3, 0.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(eval_circular(3, -1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(eval_circular(0, 1.0, 1.0, 0.0), DomainError);
}

TEST(Circular, RepresentableAtRydbergScale) {
  const auto a = circular_log_amplitude(120, 14000.0, M_PI / 2.0, 0.3);
  EXPECT_TRUE(std::isfinite(a.log_magnitude));
  // The raw value underflows nowhere near the ring.
  EXPECT_GT(a.log_magnitude, -100.0);
  EXPECT_TRUE(std::isfinite(circular_log_amplitude(120, 1e6, 0.01, 0.0).log_magnitude));
}

// Integral of |psi|^2 over r and theta (times 2 pi for phi) by nested
// adaptive quadrature.
double circular_norm_by_quadrature(int n) {
  const double r_hi = 3.0 * n * n + 60.0;
  auto theta_integrand = [&](double theta) {
    return gauss_kronrod<double, 61>::integrate(
        [&](double r) {
          if (r <= 0.0) return 0.0;
          const double lm = circular_log_amplitude(n, r, theta, 0.0).log_magnitude;
          return std::exp(2.0 * lm) * r * r;
        },
        0.0, r_hi, 12, 1e-12);
  };
  return 2.0 * M_PI * gauss_kronrod<double, 61>::integrate(
                          [&](double theta) { return theta_integrand(theta) * std::sin(theta); }, 0.0, M_PI, 12,
                          1e-12);
}

TEST(Circular, NormalizedByQuadrature) {
  for (int n : {1, 2, 5, 10, 40, 120}) EXPECT_NEAR(circular_norm_by_quadrature(n), 1.0, 1e-8) << n;
}

TEST(Circular, RadialMaximumInPlane) {
  for (int n : {5, 20, 120}) {
    auto neg_log_density = [n](double r) { return -circular_log_amplitude(n, r, M_PI / 2.0, 0.0).log_magnitude; };
    const auto [r_max, value] =
        boost::math::tools::brent_find_minima(neg_log_density, 1.0, 4.0 * n * n, std::numeric_limits<double>::digits / 2);
    (void)value;
    EXPECT_NEAR(r_max / (n * (n - 1.0)), 1.0, 1e-6) << n;
  }
}

TEST(Circular, MeanRadiusByQuadrature) {
  for (int n : {1, 3, 10, 120}) {
    // Separable: <r> = int r^3 R^2 dr / int r^2 R^2 dr with R ~ r^(n-1) e^(-r/n).
    auto weight = [n](double r, int power) {
      if (r <= 0.0) return 0.0;
      const double log_r = std::log(r);
      const double c = 2.0 * ((n - 1) * std::log(n * (n - 1.0) + 1.0) - (n * (n - 1.0) + 1.0) / n);
      return std::exp(2.0 * ((n - 1) * log_r - r / n) - c + power * log_r);
    };
    const double hi = 4.0 * n * n + 80.0;
    const double num = gauss_kronrod<double, 61>::integrate([&](double r) { return weight(r, 3); }, 0.0, hi, 12, 1e-13);
    const double den = gauss_kronrod<double, 61>::integrate([&](double r) { return weight(r, 2); }, 0.0, hi, 12, 1e-13);
    EXPECT_NEAR(num / den / circular_mean_radius(n), 1.0, 1e-9) << n;
  }
  EXPECT_DOUBLE_EQ(circular_mean_radius(120), 14460.0);
  EXPECT_EQ(circular_radius_element(5, 6), 0.0);
  EXPECT_DOUBLE_EQ(circular_radius_element(6, 6), circular_mean_radius(6));
}

TEST(FreeParticle, Examples) {
  const auto m = free_particle_weights(10.0, 2.5);
  EXPECT_NEAR(m.density(10.0), 1.0 / std::sqrt(2.0 * M_PI * 6.25), 1e-15);
  for (double k : {0.5, 2.0, 7.0}) EXPECT_DOUBLE_EQ(m.density(10.0 + k), m.density(10.0 - k));
  const double total = gauss_kronrod<double, 61>::integrate([&](double p) { return m.density(p); }, -40.0, 60.0, 15, 1e-14);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_THROW(free_particle_weights(1.0, 0.0), DomainError);
}

TEST(EigenBasis, KindsAndFloors) {
  EXPECT_EQ(EigenBasis(ShoBasis{2.0}).n_min(), 0);
  EXPECT_EQ(EigenBasis(BoxBasis{}).n_min(), 1);
  EXPECT_EQ(EigenBasis(CircularBasis{}).n_min(), 1);
  EXPECT_FALSE(EigenBasis(RotatorBasis{}).n_min().has_value());
  EXPECT_EQ(EigenBasis(CircularBasis{}).dimension(), 2);
  EXPECT_EQ(EigenBasis(BoxBasis{}).dimension(), 1);
  EXPECT_TRUE(EigenBasis(BoxBasis{2.0}) == EigenBasis(BoxBasis{2.0}));
  EXPECT_FALSE(EigenBasis(BoxBasis{2.0}) == EigenBasis(BoxBasis{1.0}));
  EXPECT_THROW(EigenBasis(BoxBasis{-1.0}), DomainError);
  EXPECT_THROW(EigenBasis(ShoBasis{0.0}), DomainError);
}

}  // namespace
