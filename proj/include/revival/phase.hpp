#ifndef REVIVAL_PHASE_HPP
#define REVIVAL_PHASE_HPP

#include <cmath>
#include <complex>

namespace revival {

namespace detail {

// 2*pi = c1 + c2 + c3 to ~160 bits.
inline constexpr double two_pi_c1 = 6.283185307179586;
inline constexpr double two_pi_c2 = 2.4492935982947064e-16;
inline constexpr double two_pi_c3 = -5.989539619436679e-33;
inline constexpr double inv_two_pi = 0.15915494309189535;
inline constexpr long double two_pi_long = 6.283185307179586476925286766559005768L;

}  // namespace detail

/// Reduces energy * t to roughly (-pi, pi].
///
/// The product is kept as a double-double (fma residual). Removing k * c1
/// with a single fma is exact: both p and k * c1 are multiples of ulp(c1)
/// once |p| >= 4, and the difference is below 4. The remaining terms are
/// small, so for |energy * t| up to 1e15 the angle is good to ~1e-15 rad,
/// where a plain double product would be off by ~0.1 rad.
inline double reduced_phase(double energy, double t) {
  const double p = energy * t;
  const double residual = std::fma(energy, t, -p);
  const double k = std::nearbyint(p * detail::inv_two_pi);
  double r = std::fma(-k, detail::two_pi_c1, p);
  r = std::fma(-k, detail::two_pi_c2, r);
  r = std::fma(-k, detail::two_pi_c3, r);
  return r + residual;
}

/// Reduces a phase given in turns (units of 2*pi) to radians in [-pi, pi].
inline double turns_to_phase(long double turns) {
  const long double frac = turns - std::nearbyint(turns);
  return static_cast<double>(frac * detail::two_pi_long);
}

/// exp(-i * energy * t) with argument reduction.
inline std::complex<double> evolution_phasor(double energy, double t) {
  const double angle = reduced_phase(energy, t);
  return {std::cos(angle), -std::sin(angle)};
}

}  // namespace revival

#endif  // REVIVAL_PHASE_HPP
