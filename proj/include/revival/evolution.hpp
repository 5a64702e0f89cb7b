#ifndef REVIVAL_EVOLUTION_HPP
#define REVIVAL_EVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "revival/eigenbasis.hpp"
#include "revival/error.hpp"
#include "revival/grid.hpp"
#include "revival/phase.hpp"
#include "revival/spectra.hpp"
#include "revival/units.hpp"
#include "revival/weights.hpp"

namespace revival {

namespace detail {

inline bool spectrum_matches_basis(const Spectrum& s, const EigenBasis& b) {
  switch (s.kind()) {
    case SpectrumKind::HarmonicOscillator: {
      const auto* ho = s.get_if<HarmonicOscillator>();
      const auto* sb = b.get_if<ShoBasis>();
      return sb && ho->dimension == 1 && ho->omega == sb->omega;
    }
    case SpectrumKind::InfiniteWell: {
      const auto* bb = b.get_if<BoxBasis>();
      return bb && bb->length == s.get_if<InfiniteWell>()->length;
    }
    case SpectrumKind::RigidRotator: return b.kind() == BasisKind::Rotator;
    case SpectrumKind::Hydrogen: return b.kind() == BasisKind::CircularHydrogen;
    // Synthetic laws may drive any basis.
    case SpectrumKind::Polynomial:
    case SpectrumKind::Tabulated: return true;
  }
  return false;
}

}  // namespace detail

/// A spectrum, eigenbasis and weights bound together, with the time scales
/// at the weights' centre cached.
class WavePacket {
 public:
  WavePacket(Spectrum spectrum, EigenBasis basis, WeightDistribution weights)
      : spectrum_(std::move(spectrum)), basis_(std::move(basis)), weights_(std::move(weights)) {
    if (!detail::spectrum_matches_basis(spectrum_, basis_)) {
      throw DomainError(std::string("spectrum '") + std::string(to_string(spectrum_.kind())) +
                        "' does not describe the '" + std::string(to_string(basis_.kind())) + "' eigenbasis");
    }
    for (int n : {weights_.n_lo(), weights_.n_hi()}) {
      if (!spectrum_.admits(n)) {
        throw DomainError("weight window reaches n = " + std::to_string(n) + ", outside the spectrum");
      }
      if (const auto lo = basis_.n_min(); lo && n < *lo) {
        throw DomainError("weight window reaches n = " + std::to_string(n) + ", below the basis floor");
      }
    }
    energies_.reserve(weights_.size());
    for (int n = weights_.n_lo(); n <= weights_.n_hi(); ++n) energies_.push_back(energy(spectrum_, n));
    derivatives_ = derivatives(spectrum_, weights_.n_bar());
    scales_ = time_scales(derivatives_, energy(spectrum_, weights_.n_bar()), weights_.n_bar());
  }

  const Spectrum& spectrum() const noexcept { return spectrum_; }
  const EigenBasis& basis() const noexcept { return basis_; }
  const WeightDistribution& weights() const noexcept { return weights_; }
  const TimeScales& scales() const noexcept { return scales_; }
  const Derivatives& derivatives_at_center() const noexcept { return derivatives_; }

  /// E_n over the weight window.
  const std::vector<double>& energies() const noexcept { return energies_; }

 private:
  Spectrum spectrum_;
  EigenBasis basis_;
  WeightDistribution weights_;
  std::vector<double> energies_;
  Derivatives derivatives_;
  TimeScales scales_;
};

enum class Evolver { Exact, ThirdOrder };

/// c_n exp(-i E_n t) over the window.
inline std::vector<std::complex<double>> exact_amplitudes(const WavePacket& packet, double t) {
  if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
  const auto c = packet.weights().coefficients();
  const auto& e = packet.energies();
  std::vector<std::complex<double>> a(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) a[i] = c[i] * evolution_phasor(e[i], t);
  return a;
}

/// c_n exp(-2 pi i [d t/T_cl + d^2 t/t_rev + d^3 t/t_sr]) with d = n - n_bar,
/// each term signed like the matching energy derivative. Unbounded scales
/// contribute nothing. The common factor exp(-i E_nbar t) is omitted.
inline std::vector<std::complex<double>> third_order_amplitudes(const WavePacket& packet, double t) {
  if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
  const auto& w = packet.weights();
  const auto& scales = packet.scales();
  const auto& d = packet.derivatives_at_center();
  const auto c = w.coefficients();
  std::vector<std::complex<double>> a(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const long double offset = static_cast<long double>(w.n_lo() + static_cast<int>(i) - w.n_bar());
    long double turns = 0.0L;
    long double power = 1.0L;
    for (int k = 1; k <= 3; ++k) {
      power *= offset;
      const auto& scale = scales[k];
      if (!scale.finite()) continue;
      const long double sign = d[k] < 0.0 ? -1.0L : 1.0L;
      turns += sign * power * static_cast<long double>(t) / static_cast<long double>(scale.value());
    }
    const double angle = turns_to_phase(turns);
    a[i] = c[i] * std::complex<double>(std::cos(angle), -std::sin(angle));
  }
  return a;
}

inline std::vector<std::complex<double>> amplitudes(const WavePacket& packet, double t, Evolver evolver) {
  return evolver == Evolver::Exact ? exact_amplitudes(packet, t) : third_order_amplitudes(packet, t);
}

// ---------------------------------------------------------------------------
// Grids

/// Plot grid used when a scenario asks for "default".
inline GridSpec default_grid(const WavePacket& packet) {
  const auto& basis = packet.basis();
  switch (basis.kind()) {
    case BasisKind::Sho: {
      const double omega = basis.get_if<ShoBasis>()->omega;
      // Turning point of the highest contributing level plus evanescent tail,
      // in the scaled coordinate, but never narrower than [-12, 12].
      const double top = packet.weights().n_hi() + 0.5;
      const double half = std::max(12.0, std::sqrt(2.0 * top) + 4.0) / std::sqrt(omega);
      return {{Axis{"x", -half, half, 1200, false}}};
    }
    case BasisKind::Box: {
      const double length = basis.get_if<BoxBasis>()->length;
      return {{Axis{"x", 0.0, length, 1000, false}}};
    }
    case BasisKind::Rotator: return {{Axis{"phi", 0.0, units::two_pi, 1024, true}}};
    case BasisKind::CircularHydrogen: {
      const int top = packet.weights().n_hi();
      const double half = circular_mean_radius(top) + 4.0 * circular_radius_spread(top);
      return {{Axis{"x", -half, half, 256, false}, Axis{"y", -half, half, 256, false}}};
    }
  }
  throw DomainError("unknown basis");
}

inline void validate_grid(const EigenBasis& basis, const GridSpec& grid) {
  const std::size_t want = static_cast<std::size_t>(basis.dimension());
  if (grid.axes.size() != want) {
    throw DomainError("the '" + std::string(to_string(basis.kind())) + "' basis needs a " + std::to_string(want) +
                      "-axis grid, got " + std::to_string(grid.axes.size()));
  }
  for (const auto& a : grid.axes) a.validate();
  const Axis& a = grid.axes.front();
  if (const auto* box = basis.get_if<BoxBasis>()) {
    const double last = a.periodic ? a.point(a.count - 1) : a.max;
    if (a.min < 0.0 || last > box->length) {
      throw DomainError("box grid [" + format_double(a.min) + ", " + format_double(a.max) + "] leaves [0, " +
                        format_double(box->length) + "]");
    }
  }
  if (basis.kind() == BasisKind::Rotator) {
    const double last = a.periodic ? a.point(a.count - 1) : a.max;
    if (a.min < 0.0 || last > units::two_pi) {
      throw DomainError("rotator grid must lie within [0, 2 pi]");
    }
  }
}

namespace detail {

// Largest log|psi_n| over the plane grid, used as the common rescale.
inline double circular_log_offset(const WeightDistribution& w, const GridSpec& grid) {
  double best = -std::numeric_limits<double>::infinity();
  const auto xs = grid.axes[0].points();
  const auto ys = grid.axes[1].points();
  for (int n = w.n_lo(); n <= w.n_hi(); ++n) {
    const double log_norm = circular_log_norm(n);
    for (double x : xs) {
      for (double y : ys) {
        const double r = std::hypot(x, y);
        double lm;
        if (r == 0.0) {
          lm = n == 1 ? log_norm : -std::numeric_limits<double>::infinity();
        } else {
          lm = log_norm + (n - 1) * std::log(r) - r / n;
        }
        best = std::max(best, lm);
      }
    }
  }
  return best;
}

}  // namespace detail

/// |sum_n a_n psi_n|^2 on the grid for the given amplitudes (window order).
inline GridDensity synthesize(const WavePacket& packet, const std::vector<std::complex<double>>& a,
                              const GridSpec& grid, double t) {
  const auto& basis = packet.basis();
  validate_grid(basis, grid);
  const auto& w = packet.weights();
  GridDensity out;
  out.grid = grid;
  out.time = t;
  out.values.assign(grid.size(), 0.0);
  const int lo = w.n_lo();
  const std::size_t count = a.size();

  switch (basis.kind()) {
    case BasisKind::Sho: {
      const double omega = basis.get_if<ShoBasis>()->omega;
      std::vector<double> psi(static_cast<std::size_t>(w.n_hi()) + 1);
      const auto xs = grid.axes[0].points();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        eval_sho_all(omega, xs[i], psi);
        std::complex<double> sum = 0.0;
        for (std::size_t k = 0; k < count; ++k) sum += a[k] * psi[static_cast<std::size_t>(lo) + k];
        out.values[i] = std::norm(sum);
      }
      break;
    }
    case BasisKind::Box: {
      const double length = basis.get_if<BoxBasis>()->length;
      const auto xs = grid.axes[0].points();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = std::clamp(xs[i], 0.0, length);
        std::complex<double> sum = 0.0;
        for (std::size_t k = 0; k < count; ++k) sum += a[k] * eval_box(lo + static_cast<int>(k), length, x);
        out.values[i] = std::norm(sum);
      }
      break;
    }
    case BasisKind::Rotator: {
      const auto xs = grid.axes[0].points();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        std::complex<double> sum = 0.0;
        for (std::size_t k = 0; k < count; ++k) sum += a[k] * eval_rotator(lo + static_cast<int>(k), xs[i]);
        out.values[i] = std::norm(sum);
      }
      break;
    }
    case BasisKind::CircularHydrogen: {
      const double offset = detail::circular_log_offset(w, grid);
      const auto xs = grid.axes[0].points();
      const auto ys = grid.axes[1].points();
      std::vector<double> log_norm(count);
      for (std::size_t k = 0; k < count; ++k) log_norm[k] = circular_log_norm(lo + static_cast<int>(k));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
          const double r = std::hypot(xs[i], ys[j]);
          const double phi = std::atan2(ys[j], xs[i]);
          std::complex<double> sum = 0.0;
          for (std::size_t k = 0; k < count; ++k) {
            const int n = lo + static_cast<int>(k);
            double lm;
            if (r == 0.0) {
              if (n != 1) continue;
              lm = log_norm[k];
            } else {
              lm = log_norm[k] + (n - 1) * std::log(r) - r / n;
            }
            const double phase = std::remainder((n - 1) * phi, units::two_pi);
            sum += a[k] * std::polar(std::exp(lm - offset), phase);
          }
          out.values[i * ys.size() + j] = std::norm(sum);
        }
      }
      out.normalized = false;
      out.log_scale = 2.0 * offset;
      break;
    }
  }
  return out;
}

inline GridDensity evolve_exact(const WavePacket& packet, double t, const GridSpec& grid) {
  return synthesize(packet, exact_amplitudes(packet, t), grid, t);
}

inline GridDensity evolve_third_order(const WavePacket& packet, double t, const GridSpec& grid) {
  return synthesize(packet, third_order_amplitudes(packet, t), grid, t);
}

inline GridDensity evolve(const WavePacket& packet, double t, const GridSpec& grid, Evolver evolver) {
  return synthesize(packet, amplitudes(packet, t, evolver), grid, t);
}

/// <r>(t) for a circular-state packet, from the matrix elements between the
/// contributing states.
inline double expectation_radius(const WavePacket& packet, double t) {
  if (packet.basis().kind() != BasisKind::CircularHydrogen) {
    throw DomainError("expectation_radius needs a circular hydrogen packet");
  }
  const auto a = exact_amplitudes(packet, t);
  const int lo = packet.weights().n_lo();
  std::complex<double> sum = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    for (std::size_t n = 0; n < a.size(); ++n) {
      const double element = circular_radius_element(lo + static_cast<int>(m), lo + static_cast<int>(n));
      if (element != 0.0) sum += std::conj(a[m]) * a[n] * element;
    }
  }
  return sum.real();
}

// ---------------------------------------------------------------------------
// Cross-correlation against a transformed initial packet

struct IdentityMap {};
/// Rigid rotation phi -> phi + angle (rotator, circular states).
struct AngularShift {
  double angle = 0.0;
};
/// Mirror image: x -> L - x in the box, x -> -x for the oscillator.
struct Reflection {};

using DomainMap = std::variant<IdentityMap, AngularShift, Reflection>;

/// psi_n(T r) = lambda_n psi_n(r) for the isometries above.
inline std::complex<double> map_eigenvalue(const EigenBasis& basis, const DomainMap& map, int n) {
  if (std::holds_alternative<IdentityMap>(map)) return 1.0;
  if (const auto* shift = std::get_if<AngularShift>(&map)) {
    if (basis.kind() == BasisKind::Rotator) return std::polar(1.0, std::remainder(n * shift->angle, units::two_pi));
    if (basis.kind() == BasisKind::CircularHydrogen) {
      return std::polar(1.0, std::remainder((n - 1) * shift->angle, units::two_pi));
    }
    throw DomainError("an angular shift is not an isometry of the '" + std::string(to_string(basis.kind())) +
                      "' domain");
  }
  if (basis.kind() == BasisKind::Box) return (n % 2 == 0) ? -1.0 : 1.0;
  if (basis.kind() == BasisKind::Sho) return (n % 2 == 0) ? 1.0 : -1.0;
  throw DomainError("a reflection is not an isometry of the '" + std::string(to_string(basis.kind())) + "' domain");
}

/// |<Psi(T r, 0) | Psi(r, t)>|^2.
inline double cross_correlate(const WavePacket& packet, double t, const DomainMap& map) {
  const auto c = packet.weights().coefficients();
  const auto a = exact_amplitudes(packet, t);
  const int lo = packet.weights().n_lo();
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto lambda = map_eigenvalue(packet.basis(), map, lo + static_cast<int>(k));
    sum += std::conj(c[k] * lambda) * a[k];
  }
  return std::norm(sum);
}

}  // namespace revival

#endif  // REVIVAL_EVOLUTION_HPP
