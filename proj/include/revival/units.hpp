#ifndef REVIVAL_UNITS_HPP
#define REVIVAL_UNITS_HPP

#include <numbers>

namespace revival::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Atomic unit of time as quoted to three figures. CODATA gives
// 2.4188843265857e-17 s; the rounded value keeps nanosecond output aligned
// with the customary published figures.
inline constexpr double atomic_time_seconds = 2.42e-17;
inline constexpr double atomic_time_ns = atomic_time_seconds * 1e9;

constexpr double au_to_ns(double t) { return t * atomic_time_ns; }
constexpr double ns_to_au(double t) { return t / atomic_time_ns; }

}  // namespace revival::units

#endif  // REVIVAL_UNITS_HPP
