#ifndef REVIVAL_SPECTRA_HPP
#define REVIVAL_SPECTRA_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "revival/error.hpp"
#include "revival/units.hpp"

namespace revival {

// Energy laws, in atomic units.

struct HarmonicOscillator {
  double omega = 1.0;
  int dimension = 1;
  bool operator==(const HarmonicOscillator&) const = default;
};

struct InfiniteWell {
  double length = 1.0;
  bool operator==(const InfiniteWell&) const = default;
};

struct RigidRotator {
  double inertia = 1.0;
  bool operator==(const RigidRotator&) const = default;
};

struct Hydrogen {
  bool operator==(const Hydrogen&) const = default;
};

/// E_n = a + b n + c n^2, with an explicit floor on n.
struct Polynomial {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int n_min = 0;
  bool operator==(const Polynomial&) const = default;
};

/// Tabulated energies over a contiguous range of quantum numbers.
class Tabulated {
 public:
  Tabulated() = default;

  /// Throws DomainError unless `points` is non-empty, strictly increasing in
  /// n and free of gaps.
  explicit Tabulated(std::vector<std::pair<int, double>> points) {
    if (points.empty()) throw DomainError("tabulated spectrum needs at least one (n, E) pair");
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].first != points[i - 1].first + 1) {
        throw DomainError("tabulated spectrum must list consecutive n; found " +
                          std::to_string(points[i - 1].first) + " followed by " +
                          std::to_string(points[i].first));
      }
    }
    first_ = points.front().first;
    values_.reserve(points.size());
    for (const auto& p : points) values_.push_back(p.second);
  }

  int first() const noexcept { return first_; }
  int last() const noexcept { return first_ + static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const noexcept { return values_; }

  double at(int n) const {
    if (n < first() || n > last()) {
      throw DomainError("n = " + std::to_string(n) + " outside tabulated range [" +
                        std::to_string(first()) + ", " + std::to_string(last()) + "]");
    }
    return values_[static_cast<std::size_t>(n - first_)];
  }

  bool operator==(const Tabulated&) const = default;

 private:
  int first_ = 0;
  std::vector<double> values_;
};

enum class SpectrumKind { HarmonicOscillator, InfiniteWell, RigidRotator, Hydrogen, Polynomial, Tabulated };

inline std::string_view to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::HarmonicOscillator: return "sho";
    case SpectrumKind::InfiniteWell: return "well";
    case SpectrumKind::RigidRotator: return "rotator";
    case SpectrumKind::Hydrogen: return "hydrogen";
    case SpectrumKind::Polynomial: return "polynomial";
    case SpectrumKind::Tabulated: return "table";
  }
  return "unknown";
}

/// A discrete bound-state energy law. Immutable value type.
class Spectrum {
 public:
  using Law = std::variant<HarmonicOscillator, InfiniteWell, RigidRotator, Hydrogen, Polynomial, Tabulated>;

  Spectrum(Law law) : law_(std::move(law)) { validate(); }  // NOLINT(google-explicit-constructor)

  template <class T>
    requires std::is_constructible_v<Law, T> && (!std::is_same_v<std::decay_t<T>, Law>)
  Spectrum(T law) : Spectrum(Law(std::move(law))) {}  // NOLINT(google-explicit-constructor)

  const Law& law() const noexcept { return law_; }
  SpectrumKind kind() const noexcept { return static_cast<SpectrumKind>(law_.index()); }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&law_);
  }

  /// Smallest admissible quantum number; empty for the rotator, which accepts
  /// every integer.
  std::optional<int> n_min() const {
    return std::visit(
        [](const auto& s) -> std::optional<int> {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, HarmonicOscillator>) return 0;
          else if constexpr (std::is_same_v<S, InfiniteWell> || std::is_same_v<S, Hydrogen>) return 1;
          else if constexpr (std::is_same_v<S, RigidRotator>) return std::nullopt;
          else if constexpr (std::is_same_v<S, Polynomial>) return s.n_min;
          else return s.first();
        },
        law_);
  }

  /// Largest admissible quantum number; only tables are bounded above.
  std::optional<int> n_max() const {
    if (const auto* t = get_if<Tabulated>()) return t->last();
    return std::nullopt;
  }

  bool admits(int n) const {
    const auto lo = n_min();
    const auto hi = n_max();
    return (!lo || n >= *lo) && (!hi || n <= *hi);
  }

  bool operator==(const Spectrum&) const = default;

 private:
  void validate() const {
    std::visit(
        [](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, HarmonicOscillator>) {
            if (!(s.omega > 0.0)) throw DomainError("oscillator frequency must be positive");
            if (s.dimension < 1) throw DomainError("oscillator dimension must be at least 1");
          } else if constexpr (std::is_same_v<S, InfiniteWell>) {
            if (!(s.length > 0.0)) throw DomainError("well length must be positive");
          } else if constexpr (std::is_same_v<S, RigidRotator>) {
            if (!(s.inertia > 0.0)) throw DomainError("moment of inertia must be positive");
          }
        },
        law_);
  }

  Law law_;
};

/// E_n for the given law. Throws DomainError for inadmissible n.
inline double energy(const Spectrum& spectrum, int n) {
  if (!spectrum.admits(n)) {
    throw DomainError("quantum number n = " + std::to_string(n) + " is below the floor of the " +
                      std::string(to_string(spectrum.kind())) + " spectrum");
  }
  const double x = n;
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, HarmonicOscillator>) {
          return (x + 0.5 * s.dimension) * s.omega;
        } else if constexpr (std::is_same_v<S, InfiniteWell>) {
          return x * x * units::pi * units::pi / (2.0 * s.length * s.length);
        } else if constexpr (std::is_same_v<S, RigidRotator>) {
          return x * x / (2.0 * s.inertia);
        } else if constexpr (std::is_same_v<S, Hydrogen>) {
          return -0.5 / (x * x);
        } else if constexpr (std::is_same_v<S, Polynomial>) {
          return s.a + x * (s.b + x * s.c);
        } else {
          return s.at(n);
        }
      },
      spectrum.law());
}

/// dE/dn, d2E/dn2, d3E/dn3 at a central quantum number.
struct Derivatives {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;

  double operator[](int order) const {
    switch (order) {
      case 1: return first;
      case 2: return second;
      case 3: return third;
      default: throw DomainError("derivative order must be 1, 2 or 3");
    }
  }
};

/// Analytic derivatives for closed-form laws; central differences with unit
/// spacing for tables (needs two neighbours on each side).
inline Derivatives derivatives(const Spectrum& spectrum, int n_bar) {
  if (const auto* table = spectrum.get_if<Tabulated>()) {
    if (n_bar - 2 < table->first() || n_bar + 2 > table->last()) {
      throw DomainError("tabulated derivatives at n = " + std::to_string(n_bar) +
                        " need entries for n-2 .. n+2 within [" + std::to_string(table->first()) + ", " +
                        std::to_string(table->last()) + "]");
    }
    const double em2 = table->at(n_bar - 2);
    const double em1 = table->at(n_bar - 1);
    const double e0 = table->at(n_bar);
    const double ep1 = table->at(n_bar + 1);
    const double ep2 = table->at(n_bar + 2);
    // Five-point stencils: exact for tables sampled from polynomials up to
    // degree four, so the third-order expansion of a cubic table terminates.
    return {(em2 - 8.0 * em1 + 8.0 * ep1 - ep2) / 12.0, (-em2 + 16.0 * em1 - 30.0 * e0 + 16.0 * ep1 - ep2) / 12.0,
            (ep2 - 2.0 * ep1 + 2.0 * em1 - em2) / 2.0};
  }
  if (!spectrum.admits(n_bar)) {
    throw DomainError("central quantum number n = " + std::to_string(n_bar) + " is outside the " +
                      std::string(to_string(spectrum.kind())) + " spectrum");
  }
  const double x = n_bar;
  return std::visit(
      [&](const auto& s) -> Derivatives {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, HarmonicOscillator>) {
          return {s.omega, 0.0, 0.0};
        } else if constexpr (std::is_same_v<S, InfiniteWell>) {
          const double k = units::pi * units::pi / (s.length * s.length);
          return {k * x, k, 0.0};
        } else if constexpr (std::is_same_v<S, RigidRotator>) {
          return {x / s.inertia, 1.0 / s.inertia, 0.0};
        } else if constexpr (std::is_same_v<S, Hydrogen>) {
          const double x3 = x * x * x;
          return {1.0 / x3, -3.0 / (x3 * x), 12.0 / (x3 * x * x)};
        } else if constexpr (std::is_same_v<S, Polynomial>) {
          return {s.b + 2.0 * s.c * x, 2.0 * s.c, 0.0};
        } else {
          return {};  // handled above
        }
      },
      spectrum.law());
}

/// A positive duration in atomic units, or unbounded.
class TimeScale {
 public:
  constexpr TimeScale() = default;
  constexpr explicit TimeScale(double value) : value_(value) {}

  static constexpr TimeScale unbounded() { return TimeScale(); }

  constexpr bool finite() const noexcept { return value_.has_value(); }

  /// The duration, or +infinity when unbounded.
  constexpr double value() const noexcept {
    return value_ ? *value_ : std::numeric_limits<double>::infinity();
  }

  constexpr bool operator==(const TimeScale&) const = default;

 private:
  std::optional<double> value_;
};

struct TimeScales {
  TimeScale classical;     ///< T_cl
  TimeScale revival;       ///< t_rev
  TimeScale superrevival;  ///< t_sr
  int n_bar = 0;

  /// A vanishing first derivative leaves the packet without any motion.
  bool stationary() const noexcept { return !classical.finite(); }

  const TimeScale& operator[](int order) const {
    switch (order) {
      case 1: return classical;
      case 2: return revival;
      case 3: return superrevival;
      default: throw DomainError("time-scale order must be 1, 2 or 3");
    }
  }
};

/// |E^(k)| below this bound counts as an exact zero.
inline double zero_tolerance(double energy_at_center) {
  return 1e-12 * std::max(1.0, std::abs(energy_at_center));
}

/// 2*pi / (|E^(k)| / k!) for k = 1, 2, 3.
inline TimeScales time_scales(const Derivatives& d, double energy_at_center, int n_bar) {
  const double tol = zero_tolerance(energy_at_center);
  auto scale = [tol](double derivative, double factorial) {
    const double mag = std::abs(derivative);
    return mag < tol ? TimeScale::unbounded() : TimeScale(units::two_pi / (mag / factorial));
  };
  return {scale(d.first, 1.0), scale(d.second, 2.0), scale(d.third, 6.0), n_bar};
}

inline TimeScales time_scales(const Spectrum& spectrum, int n_bar) {
  return time_scales(derivatives(spectrum, n_bar), energy(spectrum, n_bar), n_bar);
}

enum class RevivalClass { PerfectlyPeriodic, PerfectRevivals, Superrevivals };

inline std::string_view to_string(RevivalClass c) {
  switch (c) {
    case RevivalClass::PerfectlyPeriodic: return "PerfectlyPeriodic";
    case RevivalClass::PerfectRevivals: return "PerfectRevivals";
    case RevivalClass::Superrevivals: return "Superrevivals";
  }
  return "unknown";
}

inline RevivalClass classify(const TimeScales& scales) {
  if (scales.superrevival.finite()) return RevivalClass::Superrevivals;
  if (scales.revival.finite()) return RevivalClass::PerfectRevivals;
  return RevivalClass::PerfectlyPeriodic;
}

}  // namespace revival

#endif  // REVIVAL_SPECTRA_HPP
