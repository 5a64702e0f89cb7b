#ifndef REVIVAL_GRID_HPP
#define REVIVAL_GRID_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "revival/error.hpp"
#include "revival/format.hpp"

namespace revival {

/// Uniformly spaced sample points. A periodic axis omits its upper endpoint.
struct Axis {
  std::string name = "x";
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;
  bool periodic = false;

  double spacing() const {
    return periodic ? (max - min) / static_cast<double>(count)
                    : (max - min) / static_cast<double>(count - 1);
  }

  double point(std::size_t i) const { return min + static_cast<double>(i) * spacing(); }

  std::vector<double> points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = point(i);
    return out;
  }

  /// Quadrature weight of sample i: trapezoid, or uniform for periodic axes.
  double weight(std::size_t i) const {
    const double h = spacing();
    if (periodic) return h;
    return (i == 0 || i + 1 == count) ? 0.5 * h : h;
  }

  void validate() const {
    if (count < 2) throw DomainError("axis '" + name + "' needs at least two points");
    if (!(max > min)) throw DomainError("axis '" + name + "' must have max > min");
  }

  bool operator==(const Axis&) const = default;
};

/// One or two axes; values are laid out with the first axis varying slowest.
struct GridSpec {
  std::vector<Axis> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
  }

  bool operator==(const GridSpec&) const = default;
};

/// Probability density sampled on a grid at one instant.
struct GridDensity {
  GridSpec grid;
  std::vector<double> values;
  double time = 0.0;
  /// False when the density carries an arbitrary common scale factor.
  bool normalized = true;
  /// For unnormalized densities: natural log of the factor that was divided
  /// out, i.e. true density = values * exp(log_scale).
  double log_scale = 0.0;
  std::string scenario_hash;

  /// Integral over the grid with the axis quadrature weights.
  double integral() const {
    const auto& axes = grid.axes;
    if (axes.size() == 1) {
      double sum = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) sum += axes[0].weight(i) * values[i];
      return sum;
    }
    double sum = 0.0;
    const std::size_t ny = axes[1].count;
    for (std::size_t i = 0; i < axes[0].count; ++i) {
      for (std::size_t j = 0; j < ny; ++j) sum += axes[0].weight(i) * axes[1].weight(j) * values[i * ny + j];
    }
    return sum;
  }

  double max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
};

/// Header block shared by both serialized forms.
inline nlohmann::ordered_json density_header(const GridDensity& d) {
  nlohmann::ordered_json h;
  h["time"] = d.time;
  h["scenario"] = d.scenario_hash;
  h["normalized"] = d.normalized;
  if (!d.normalized) h["log_scale"] = d.log_scale;
  auto& axes = h["axes"] = nlohmann::ordered_json::array();
  for (const auto& a : d.grid.axes) {
    axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"periodic", a.periodic}});
  }
  return h;
}

/// CSV: '#'-prefixed metadata lines, a column header, then one row per point.
inline void write_density_csv(std::ostream& os, const GridDensity& d) {
  os << "# time=" << format_double(d.time) << "\n";
  os << "# scenario=" << d.scenario_hash << "\n";
  os << "# normalized=" << (d.normalized ? "true" : "false") << "\n";
  if (!d.normalized) os << "# log_scale=" << format_double(d.log_scale) << "\n";
  const auto& axes = d.grid.axes;
  for (const auto& a : axes) os << a.name << ",";
  os << "density\n";
  if (axes.size() == 1) {
    for (std::size_t i = 0; i < axes[0].count; ++i) {
      os << format_double(axes[0].point(i)) << "," << format_double(d.values[i]) << "\n";
    }
    return;
  }
  const std::size_t ny = axes[1].count;
  for (std::size_t i = 0; i < axes[0].count; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      os << format_double(axes[0].point(i)) << "," << format_double(axes[1].point(j)) << ","
         << format_double(d.values[i * ny + j]) << "\n";
    }
  }
}

/// Binary form: a JSON header (written by the caller next to the payload)
/// plus little-endian float64 values in row-major order.
inline nlohmann::ordered_json binary_density_header(const GridDensity& d, const std::string& payload_name) {
  auto h = density_header(d);
  h["dtype"] = "float64-le";
  h["layout"] = "row-major, first axis slowest";
  h["payload"] = payload_name;
  h["size"] = d.values.size();
  return h;
}

inline void write_density_payload(std::ostream& os, const GridDensity& d) {
  for (double v : d.values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int k = 0; k < 8; ++k, bits >>= 8) bytes[k] = static_cast<unsigned char>(bits & 0xff);
    os.write(reinterpret_cast<const char*>(bytes), 8);
  }
}

inline std::vector<double> read_density_payload(const std::string& bytes) {
  if (bytes.size() % 8 != 0) throw DomainError("density payload length is not a multiple of 8");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) bits = (bits << 8) | static_cast<unsigned char>(bytes[i * 8 + k]);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

}  // namespace revival

#endif  // REVIVAL_GRID_HPP
