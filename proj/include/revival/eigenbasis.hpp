#ifndef REVIVAL_EIGENBASIS_HPP
#define REVIVAL_EIGENBASIS_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "revival/error.hpp"
#include "revival/units.hpp"

namespace revival {

// ---------------------------------------------------------------------------
// Harmonic oscillator

/// Fills out[k] = psi_k(x) for k = 0 .. out.size()-1 using the normalized
/// three-term recurrence in the scaled coordinate xi = sqrt(omega) x:
///   psi_{k+1} = xi sqrt(2/(k+1)) psi_k - sqrt(k/(k+1)) psi_{k-1}.
/// No Hermite polynomial or factorial is ever formed, so the values stay
/// finite wherever the gaussian envelope itself is representable.
inline void eval_sho_all(double omega, double x, std::span<double> out) {
  if (out.empty()) return;
  const double xi = std::sqrt(omega) * x;
  const double psi0 = std::pow(omega / units::pi, 0.25) * std::exp(-0.5 * xi * xi);
  out[0] = psi0;
  if (out.size() == 1) return;
  out[1] = std::sqrt(2.0) * xi * psi0;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = xi * std::sqrt(2.0 / (kk + 1.0)) * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
  }
}

inline double eval_sho(int n, double omega, double x) {
  if (n < 0) throw DomainError("oscillator level n = " + std::to_string(n) + " is negative");
  if (!(omega > 0.0)) throw DomainError("oscillator frequency must be positive");
  const double xi = std::sqrt(omega) * x;
  double prev = 0.0;
  double cur = std::pow(omega / units::pi, 0.25) * std::exp(-0.5 * xi * xi);
  for (int k = 0; k < n; ++k) {
    const double kk = k;
    const double next = xi * std::sqrt(2.0 / (kk + 1.0)) * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Particle in a box on [0, L]

inline double eval_box(int n, double length, double x) {
  if (n < 1) throw DomainError("box level n = " + std::to_string(n) + " must be at least 1");
  if (!(length > 0.0)) throw DomainError("box length must be positive");
  if (x < 0.0 || x > length) {
    throw DomainError("box coordinate x = " + std::to_string(x) + " outside [0, " + std::to_string(length) + "]");
  }
  return std::sqrt(2.0 / length) * std::sin(n * units::pi * x / length);
}

// ---------------------------------------------------------------------------
// Planar rigid rotator

inline std::complex<double> eval_rotator(int n, double phi) {
  const double angle = std::remainder(static_cast<double>(n) * phi, units::two_pi);
  return std::polar(1.0 / std::sqrt(units::two_pi), angle);
}

// ---------------------------------------------------------------------------
// Circular hydrogenic states, l = m = n - 1

/// A complex number held as log|z| and arg z.
struct LogAmplitude {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  std::complex<double> value(double log_offset = 0.0) const {
    return std::polar(std::exp(log_magnitude - log_offset), phase);
  }
};

/// log N_n for psi_{n,n-1,n-1} = N_n r^(n-1) e^(-r/n) sin^(n-1)(theta) e^(i(n-1)phi),
/// with the radial factor normalized on r^2 dr and the angular factor on the
/// unit sphere. The Condon-Shortley sign is dropped so every state is real
/// and positive at phi = 0.
inline double circular_log_norm(int n) {
  if (n < 1) throw DomainError("circular state needs n >= 1, got " + std::to_string(n));
  const double nn = n;
  const double l = nn - 1.0;
  // Radial: int r^(2n) e^(-2r/n) dr = (2n)! (n/2)^(2n+1).
  const double log_radial = -0.5 * (std::lgamma(2.0 * nn + 1.0) + (2.0 * nn + 1.0) * std::log(nn / 2.0));
  // Angular: |Y_ll| = sqrt((2l+1)! / 4pi) / (2^l l!) sin^l(theta).
  const double log_angular =
      0.5 * (std::lgamma(2.0 * l + 2.0) - std::log(4.0 * units::pi)) - l * std::log(2.0) - std::lgamma(l + 1.0);
  return log_radial + log_angular;
}

inline LogAmplitude circular_log_amplitude(int n, double r, double theta, double phi) {
  if (n < 1) throw DomainError("circular state needs n >= 1, got " + std::to_string(n));
  if (!(r > 0.0)) throw DomainError("circular state radius r = " + std::to_string(r) + " must be positive");
  const double l = n - 1;
  LogAmplitude out;
  double phase = std::remainder(l * phi, units::two_pi);
  double log_sin = 0.0;
  if (n > 1) {
    const double s = std::sin(theta);
    if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    log_sin = l * std::log(std::abs(s));
    if (s < 0.0 && (n - 1) % 2 == 1) phase += units::pi;
  }
  out.log_magnitude = circular_log_norm(n) + l * std::log(r) - r / n + log_sin;
  out.phase = phase;
  return out;
}

/// psi_{n,n-1,n-1}(r, theta, phi) * exp(-log_offset).
inline std::complex<double> eval_circular(int n, double r, double theta, double phi, double log_offset = 0.0) {
  return circular_log_amplitude(n, r, theta, phi).value(log_offset);
}

/// <r> in a single circular state: n (2n + 1) / 2.
inline double circular_mean_radius(int n) {
  if (n < 1) throw DomainError("circular state needs n >= 1, got " + std::to_string(n));
  return 0.5 * n * (2.0 * n + 1.0);
}

/// Radial standard deviation of a circular state: n sqrt(2n + 1) / 2.
inline double circular_radius_spread(int n) { return 0.5 * n * std::sqrt(2.0 * n + 1.0); }

/// <psi_m | r | psi_n> between circular states. The azimuthal factors
/// e^(i(m-1)phi) are orthogonal for m != n, so only the diagonal survives.
inline double circular_radius_element(int m, int n) { return m == n ? circular_mean_radius(n) : 0.0; }

// ---------------------------------------------------------------------------
// Free particle (momentum space)

/// Gaussian momentum distribution |phi(p)|^2 with mean p0 and spread sigma.
struct MomentumDistribution {
  double p0 = 0.0;
  double sigma = 1.0;

  double density(double p) const {
    const double d = p - p0;
    return std::exp(-d * d / (2.0 * sigma * sigma)) / std::sqrt(units::two_pi * sigma * sigma);
  }
};

inline MomentumDistribution free_particle_weights(double p0, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("momentum spread sigma must be positive");
  return {p0, sigma};
}

// ---------------------------------------------------------------------------
// Basis selection

struct ShoBasis {
  double omega = 1.0;
};
struct BoxBasis {
  double length = 1.0;
};
struct RotatorBasis {};
struct CircularBasis {};

enum class BasisKind { Sho, Box, Rotator, CircularHydrogen };

inline std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Sho: return "sho";
    case BasisKind::Box: return "box";
    case BasisKind::Rotator: return "rotator";
    case BasisKind::CircularHydrogen: return "circular";
  }
  return "unknown";
}

/// Position-space eigenfunctions of one of the worked systems.
class EigenBasis {
 public:
  using Variant = std::variant<ShoBasis, BoxBasis, RotatorBasis, CircularBasis>;

  template <class T>
    requires std::is_constructible_v<Variant, T> && (!std::is_same_v<std::decay_t<T>, Variant>)
  EigenBasis(T basis) : EigenBasis(Variant(std::move(basis))) {}  // NOLINT(google-explicit-constructor)

  EigenBasis(Variant v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (const auto* s = std::get_if<ShoBasis>(&v_); s && !(s->omega > 0.0)) {
      throw DomainError("oscillator frequency must be positive");
    }
    if (const auto* b = std::get_if<BoxBasis>(&v_); b && !(b->length > 0.0)) {
      throw DomainError("box length must be positive");
    }
  }

  BasisKind kind() const noexcept { return static_cast<BasisKind>(v_.index()); }
  const Variant& variant() const noexcept { return v_; }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&v_);
  }

  /// Dimension of the plotted domain: 1, or 2 for the equatorial plane.
  int dimension() const noexcept { return kind() == BasisKind::CircularHydrogen ? 2 : 1; }

  /// Smallest admissible n, or none for the rotator.
  std::optional<int> n_min() const noexcept {
    switch (kind()) {
      case BasisKind::Sho: return 0;
      case BasisKind::Box:
      case BasisKind::CircularHydrogen: return 1;
      case BasisKind::Rotator: return std::nullopt;
    }
    return std::nullopt;
  }

  bool operator==(const EigenBasis& o) const {
    if (kind() != o.kind()) return false;
    if (const auto* s = get_if<ShoBasis>()) return s->omega == o.get_if<ShoBasis>()->omega;
    if (const auto* b = get_if<BoxBasis>()) return b->length == o.get_if<BoxBasis>()->length;
    return true;
  }

 private:
  Variant v_;
};

}  // namespace revival

#endif  // REVIVAL_EIGENBASIS_HPP
