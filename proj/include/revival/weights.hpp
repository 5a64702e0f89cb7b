#ifndef REVIVAL_WEIGHTS_HPP
#define REVIVAL_WEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revival/error.hpp"
#include "revival/units.hpp"

namespace revival {

enum class WeightKind { Gaussian, Coherent, Custom };

inline std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Gaussian: return "gaussian";
    case WeightKind::Coherent: return "coherent";
    case WeightKind::Custom: return "custom";
  }
  return "unknown";
}

inline constexpr double default_mass_tolerance = 1e-12;

/// Normalized superposition coefficients c_n over a contiguous window.
class WeightDistribution {
 public:
  using Coefficient = std::complex<double>;

  WeightKind kind() const noexcept { return kind_; }
  int n_bar() const noexcept { return n_bar_; }
  /// Spread in n: the gaussian parameter, |alpha| for coherent states, the
  /// standard deviation of |c_n|^2 for custom weights.
  double sigma() const noexcept { return sigma_; }
  std::optional<Coefficient> alpha() const noexcept { return alpha_; }

  int n_lo() const noexcept { return n_lo_; }
  int n_hi() const noexcept { return n_lo_ + static_cast<int>(coefficients_.size()) - 1; }
  std::size_t size() const noexcept { return coefficients_.size(); }

  /// Coefficients for n = n_lo() .. n_hi().
  std::span<const Coefficient> coefficients() const noexcept { return coefficients_; }

  Coefficient coefficient(int n) const {
    if (n < n_lo() || n > n_hi()) return {};
    return coefficients_[static_cast<std::size_t>(n - n_lo_)];
  }

  double probability(int n) const { return std::norm(coefficient(n)); }

  /// |c_n|^2 over the window, in window order.
  std::vector<double> probabilities() const {
    std::vector<double> p;
    p.reserve(coefficients_.size());
    for (const auto& c : coefficients_) p.push_back(std::norm(c));
    return p;
  }

  double total_probability() const {
    double sum = 0.0;
    for (const auto& c : coefficients_) sum += std::norm(c);
    return sum;
  }

  double mean_n() const {
    double sum = 0.0;
    for (int n = n_lo(); n <= n_hi(); ++n) sum += n * probability(n);
    return sum;
  }

  /// Takes raw amplitudes for n = n_lo, n_lo + 1, ... and rescales them to
  /// unit total probability. Prefer the named constructors below.
  WeightDistribution(WeightKind kind, int n_bar, double sigma, int n_lo, std::vector<Coefficient> c,
                     std::optional<Coefficient> alpha = std::nullopt)
      : kind_(kind), n_bar_(n_bar), sigma_(sigma), alpha_(alpha), n_lo_(n_lo), coefficients_(std::move(c)) {
    normalize();
  }

 private:
  void normalize() {
    const double total = total_probability();
    if (!(total > 0.0)) throw DomainError("weight distribution has no nonzero coefficient");
    const double scale = 1.0 / std::sqrt(total);
    for (auto& c : coefficients_) c *= scale;
  }

  WeightKind kind_;
  int n_bar_;
  double sigma_;
  std::optional<Coefficient> alpha_;
  int n_lo_;
  std::vector<Coefficient> coefficients_;
};

/// Excluded two-sided mass of the discrete gaussian |c_{n_bar+k}|^2 beyond
/// |k| > half_width, before any clamping.
inline double gaussian_tail_mass(double sigma, int half_width) {
  const double peak = 1.0 / std::sqrt(units::two_pi * sigma * sigma);
  double tail = 0.0;
  for (int k = half_width + 1;; ++k) {
    const double term = peak * std::exp(-static_cast<double>(k) * k / (2.0 * sigma * sigma));
    tail += 2.0 * term;
    if (term < 1e-30 * tail || term == 0.0) break;
  }
  return tail;
}

/// Smallest half-width whose excluded tail mass is below mass_tol.
inline int gaussian_half_width(double sigma, double mass_tol) {
  int k = 0;
  while (gaussian_tail_mass(sigma, k) >= mass_tol) ++k;
  return k;
}

/// Real, positive gaussian amplitudes c_n = (2 pi sigma^2)^(-1/4) exp(-(n-n_bar)^2 / (4 sigma^2)),
/// truncated where the excluded tail mass drops below mass_tol, clamped at
/// n_min and renormalized.
inline WeightDistribution gaussian_weights(int n_bar, double sigma, std::optional<int> n_min,
                                           double mass_tol = default_mass_tolerance) {
  if (!(sigma > 0.0)) throw DomainError("gaussian spread sigma must be positive");
  if (!(mass_tol > 0.0 && mass_tol < 1.0)) throw DomainError("mass tolerance must lie in (0, 1)");
  if (n_min && n_bar < *n_min) {
    throw DomainError("packet centre n_bar = " + std::to_string(n_bar) + " lies below the spectrum floor " +
                      std::to_string(*n_min));
  }
  const int half = gaussian_half_width(sigma, mass_tol);
  const int lo = n_min ? std::max(n_bar - half, *n_min) : n_bar - half;
  const int hi = n_bar + half;
  const double amplitude = std::pow(units::two_pi * sigma * sigma, -0.25);
  std::vector<std::complex<double>> c;
  c.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) {
    const double d = n - n_bar;
    c.emplace_back(amplitude * std::exp(-d * d / (4.0 * sigma * sigma)), 0.0);
  }
  return WeightDistribution(WeightKind::Gaussian, n_bar, sigma, lo, std::move(c));
}

namespace detail {

// log |c_n|^2 for the Poisson law with mean mu = |alpha|^2.
inline double log_poisson(double mu, int n) {
  return -mu + n * std::log(mu) - std::lgamma(n + 1.0);
}

inline double poisson_tail_above(double mu, int cap) {
  double tail = 0.0;
  for (int n = cap + 1;; ++n) {
    const double term = std::exp(log_poisson(mu, n));
    tail += term;
    if ((n > mu && term < 1e-30 * std::max(tail, 1e-300)) || (n > mu && term == 0.0)) break;
  }
  return tail;
}

}  // namespace detail

/// Coherent-state amplitudes c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) for
/// n in [0, n_cap], evaluated in the log domain and renormalized.
inline WeightDistribution coherent_weights(std::complex<double> alpha, int n_cap) {
  if (n_cap < 0) throw DomainError("coherent-state cap must be non-negative");
  const double mag = std::abs(alpha);
  const double mu = mag * mag;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n_cap) + 1);
  if (mag == 0.0) {
    c[0] = 1.0;
    return WeightDistribution(WeightKind::Coherent, 0, 0.0, 0, std::move(c), alpha);
  }
  const double tail = detail::poisson_tail_above(mu, n_cap);
  if (tail >= 1e-12) {
    int needed = n_cap;
    while (detail::poisson_tail_above(mu, needed) >= 1e-12) needed += 1 + needed / 8;
    throw DomainError("coherent state truncated at n_cap = " + std::to_string(n_cap) + " drops mass " +
                      std::to_string(tail) + "; use n_cap >= " + std::to_string(needed));
  }
  const double arg = std::arg(alpha);
  for (int n = 0; n <= n_cap; ++n) {
    const double log_mag = 0.5 * detail::log_poisson(mu, n);
    c[static_cast<std::size_t>(n)] = std::polar(std::exp(log_mag), n * arg);
  }
  return WeightDistribution(WeightKind::Coherent, static_cast<int>(std::lround(mu)), mag, 0, std::move(c),
                            alpha);
}

/// Normalizes user-supplied (n, c_n) pairs; the window spans the smallest to
/// the largest n, with zeros in between where nothing was given.
inline WeightDistribution custom_weights(std::vector<std::pair<int, std::complex<double>>> pairs) {
  if (pairs.empty()) throw DomainError("custom weights need at least one (n, c_n) pair");
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].first == pairs[i - 1].first) {
      throw DomainError("custom weights list n = " + std::to_string(pairs[i].first) + " twice");
    }
  }
  const int lo = pairs.front().first;
  const int hi = pairs.back().first;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(hi - lo) + 1);
  double total = 0.0;
  double mean = 0.0;
  for (const auto& [n, value] : pairs) {
    c[static_cast<std::size_t>(n - lo)] = value;
    total += std::norm(value);
    mean += n * std::norm(value);
  }
  if (!(total > 0.0)) throw DomainError("custom weights are all zero");
  mean /= total;
  double var = 0.0;
  for (const auto& [n, value] : pairs) var += (n - mean) * (n - mean) * std::norm(value);
  var /= total;
  return WeightDistribution(WeightKind::Custom, static_cast<int>(std::lround(mean)), std::sqrt(var), lo,
                            std::move(c));
}

}  // namespace revival

#endif  // REVIVAL_WEIGHTS_HPP
