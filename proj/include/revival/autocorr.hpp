#ifndef REVIVAL_AUTOCORR_HPP
#define REVIVAL_AUTOCORR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "revival/eigenbasis.hpp"
#include "revival/error.hpp"
#include "revival/format.hpp"
#include "revival/phase.hpp"
#include "revival/spectra.hpp"
#include "revival/units.hpp"
#include "revival/weights.hpp"

namespace revival {

/// |A(t)|^2 on the uniform grid t_k = k * dt, k = 0 .. size()-1.
struct AutocorrSeries {
  double dt = 0.0;
  std::vector<double> values;
  TimeScales scales;

  std::size_t size() const noexcept { return values.size(); }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
  double t_max() const noexcept { return values.empty() ? 0.0 : time(values.size() - 1); }
};

/// 2 pi / max |E_n - E_nbar| over the window: the period of the fastest phase
/// in the autocorrelation sum. Unbounded for a single level.
inline TimeScale fastest_period(const WeightDistribution& w, const Spectrum& s) {
  const double center = energy(s, w.n_bar());
  double spread = 0.0;
  for (int n = w.n_lo(); n <= w.n_hi(); ++n) {
    if (w.probability(n) == 0.0) continue;
    spread = std::max(spread, std::abs(energy(s, n) - center));
  }
  return spread > 0.0 ? TimeScale(units::two_pi / spread) : TimeScale::unbounded();
}

/// Default sampling step: a sixteenth of the fastest period. When `align_to`
/// is finite the step is shrunk so that it divides that period into a
/// multiple of four samples; quarter and half periods then land on samples.
inline double default_time_step(const WeightDistribution& w, const Spectrum& s,
                                TimeScale align_to = TimeScale::unbounded()) {
  const TimeScale fast = fastest_period(w, s);
  double dt = fast.finite() ? fast.value() / 16.0 : (align_to.finite() ? align_to.value() / 16.0 : 1.0);
  if (align_to.finite()) {
    const double steps = std::ceil(align_to.value() / dt / 4.0) * 4.0;
    dt = align_to.value() / steps;
  }
  return dt;
}

/// |A(t)|^2 = |sum_n |c_n|^2 exp(-i E_n t)|^2 for a single time.
inline double autocorrelation(const WeightDistribution& w, const Spectrum& s, double t) {
  // Phases are taken relative to E_nbar; the common factor drops out of |A|.
  const double center = energy(s, w.n_bar());
  std::complex<double> sum = 0.0;
  for (int n = w.n_lo(); n <= w.n_hi(); ++n) {
    const double p = w.probability(n);
    if (p == 0.0) continue;
    sum += p * evolution_phasor(energy(s, n) - center, t);
  }
  return std::norm(sum);
}

/// Samples |A(t)|^2 on [0, t_max] from the weights and energies alone.
/// Throws DomainError when dt exceeds an eighth of the fastest period.
inline AutocorrSeries autocorr_series(const WeightDistribution& w, const Spectrum& s, double t_max, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(t_max >= dt)) throw DomainError("t_max must be at least one time step");
  const TimeScale fast = fastest_period(w, s);
  if (fast.finite() && dt > fast.value() / 8.0) {
    throw DomainError("time step " + format_double(dt) + " under-resolves the fastest phase; need dt <= " +
                      format_double(fast.value() / 8.0));
  }
  const double center = energy(s, w.n_bar());
  std::vector<double> prob;
  std::vector<double> rel;
  for (int n = w.n_lo(); n <= w.n_hi(); ++n) {
    const double p = w.probability(n);
    if (p == 0.0) continue;
    prob.push_back(p);
    rel.push_back(energy(s, n) - center);
  }
  AutocorrSeries out;
  out.dt = dt;
  out.scales = time_scales(s, w.n_bar());
  const auto count = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12))) + 1;
  out.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * dt;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < prob.size(); ++i) {
      const double angle = reduced_phase(rel[i], t);
      re += prob[i] * std::cos(angle);
      im -= prob[i] * std::sin(angle);
    }
    out.values[k] = re * re + im * im;
  }
  return out;
}

/// |A(t)|^2 for the free particle with gaussian momentum weights:
///   A(t) = int |phi(p)|^2 exp(-i p^2 t / 2) dp
///        = (1 + i t s^2)^(-1/2) exp(-i p0^2 t / (2 (1 + i t s^2))),
/// so |A|^2 = exp(-t^2 s^2 p0^2 / (1 + t^2 s^4)) / sqrt(1 + t^2 s^4).
inline double free_particle_autocorrelation(const MomentumDistribution& m, double t) {
  const double s2 = m.sigma * m.sigma;
  const double q = 1.0 + t * t * s2 * s2;
  return std::exp(-t * t * s2 * m.p0 * m.p0 / q) / std::sqrt(q);
}

inline AutocorrSeries free_particle_autocorr(double p0, double sigma, double t_max, double dt) {
  const auto m = free_particle_weights(p0, sigma);
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(t_max >= dt)) throw DomainError("t_max must be at least one time step");
  AutocorrSeries out;
  out.dt = dt;
  // A continuum packet has no discrete time scales.
  out.scales = {};
  const auto count = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12))) + 1;
  out.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) out.values[k] = free_particle_autocorrelation(m, out.time(k));
  return out;
}

// ---------------------------------------------------------------------------
// Peaks and periodicities

struct Peak {
  double time = 0.0;
  double height = 0.0;
};

struct PeakOptions {
  double min_height = 0.1;
  double min_separation = 0.0;
};

/// Local maxima above min_height, refined by a parabola through the three
/// samples around each discrete maximum, then thinned greedily (tallest
/// first) so that kept peaks are at least min_separation apart. End samples
/// count when they exceed their single neighbour. Restricted to samples in
/// [t_lo, t_hi]; results are in time order.
inline std::vector<Peak> detect_peaks(const AutocorrSeries& series, const PeakOptions& opt, double t_lo,
                                      double t_hi) {
  std::vector<Peak> candidates;
  const auto& v = series.values;
  const std::size_t n = v.size();
  if (n < 2 || t_hi < t_lo) return {};
  const double dt = series.dt;
  const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(t_lo / dt - 1e-9)));
  const auto last = std::min(n - 1, static_cast<std::size_t>(std::max(0.0, std::floor(t_hi / dt + 1e-9))));
  for (std::size_t k = first; k <= last && k < n; ++k) {
    bool is_max;
    if (k == 0) {
      is_max = v[0] > v[1];
    } else if (k + 1 == n) {
      is_max = v[k] > v[k - 1];
    } else {
      is_max = v[k] > v[k - 1] && v[k] >= v[k + 1];
    }
    if (!is_max) continue;
    Peak p{series.time(k), v[k]};
    if (k > 0 && k + 1 < n) {
      const double ym = v[k - 1];
      const double y0 = v[k];
      const double yp = v[k + 1];
      const double denom = ym - 2.0 * y0 + yp;
      if (denom < 0.0) {
        const double shift = 0.5 * (ym - yp) / denom;
        p.time += shift * dt;
        p.height = y0 - 0.25 * (ym - yp) * shift;
      }
    }
    if (p.height > opt.min_height) candidates.push_back(p);
  }
  if (opt.min_separation <= 0.0) return candidates;

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return candidates[a].height > candidates[b].height; });
  std::vector<Peak> kept;
  for (std::size_t idx : order) {
    const Peak& c = candidates[idx];
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](const Peak& k) {
      return std::abs(k.time - c.time) < opt.min_separation;
    });
    if (clear) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.time < b.time; });
  return kept;
}

inline std::vector<Peak> detect_peaks(const AutocorrSeries& series, const PeakOptions& opt = {}) {
  return detect_peaks(series, opt, 0.0, series.t_max());
}

/// Median spacing of consecutive peaks in [center - window/2, center + window/2];
/// empty when fewer than three peaks fall inside.
inline std::optional<double> local_period(const AutocorrSeries& series, double center, double window,
                                          const PeakOptions& opt = {}) {
  const auto peaks = detect_peaks(series, opt, center - 0.5 * window, center + 0.5 * window);
  if (peaks.size() < 3) return std::nullopt;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < peaks.size(); ++i) gaps.push_back(peaks[i].time - peaks[i - 1].time);
  std::sort(gaps.begin(), gaps.end());
  const std::size_t m = gaps.size() / 2;
  return gaps.size() % 2 == 1 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
}

// ---------------------------------------------------------------------------
// Revival report

/// One predicted recurrence and what was found near it.
struct Identification {
  std::string label;          ///< e.g. "1/4 t_rev", "1/6 t_sr", "2 T_cl"
  double predicted_time = 0.0;
  double predicted_period = 0.0;
  bool found = false;
  double detected_time = 0.0;
  std::optional<double> detected_period;
  double height = 0.0;
};

struct RevivalReport {
  std::vector<Peak> peaks;
  std::vector<std::optional<double>> peak_periods;  ///< local period around each peak
  std::vector<Identification> identified;
};

struct ReportOptions {
  double min_height = 0.1;
  /// Peaks of a train closer than this fraction of its expected period are
  /// treated as one.
  double separation_fraction = 0.6;
  /// Width of the local-period window, in expected periods.
  double period_window = 4.0;
  /// Two peaks flanking a predicted time whose heights agree to this relative
  /// tolerance mark a structure centred between them.
  double pair_tolerance = 0.01;
  int max_classical_multiple = 3;
  int max_revival_multiple = 3;
};

namespace detail {

struct Candidate {
  std::string label;
  double time;
  double period;
};

inline std::vector<Candidate> revival_candidates(const TimeScales& s, const ReportOptions& opt) {
  std::vector<Candidate> out;
  if (s.classical.finite()) {
    const double tcl = s.classical.value();
    for (int m = 1; m <= opt.max_classical_multiple; ++m) {
      out.push_back({std::to_string(m) + " T_cl", m * tcl, tcl});
    }
    if (s.revival.finite()) {
      const double trev = s.revival.value();
      for (int q : {2, 3, 4}) {
        // q odd: q subsidiary packets; q even: q/2 of them.
        const int packets = q % 2 == 1 ? q : q / 2;
        for (int p = 1; p < q; ++p) {
          if (std::gcd(p, q) != 1) continue;
          out.push_back({std::to_string(p) + "/" + std::to_string(q) + " t_rev", trev * p / q, tcl / packets});
        }
      }
      for (int k = 1; k <= opt.max_revival_multiple; ++k) {
        out.push_back({std::to_string(k) + " t_rev", k * trev, tcl});
      }
      if (s.superrevival.finite()) {
        const double tsr = s.superrevival.value();
        for (int q : {18, 12, 6}) {
          out.push_back({"1/" + std::to_string(q) + " t_sr", tsr / q, 3.0 * trev / q});
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Matches the series against the recurrences the time scales predict:
/// multiples of T_cl, p/q t_rev (q = 2, 3, 4) with period T_cl over the number
/// of subsidiary packets, whole multiples of t_rev, and t_sr/q (q = 18, 12, 6)
/// with period 3 t_rev / q. Predictions beyond the end of the series are
/// skipped.
///
/// The detected time is the peak of the local train closest to the
/// prediction, or the midpoint of the two flanking peaks when they have equal
/// height (a structure centred between samples of the train). A label is
/// found when the detected time lies within max(2 dt, period / 2).
inline RevivalReport revival_report(const AutocorrSeries& series, const TimeScales& scales,
                                    const ReportOptions& opt = {}) {
  RevivalReport report;
  const double dt = series.dt;
  const double fine = scales.classical.finite() ? scales.classical.value() : 0.0;
  report.peaks = detect_peaks(series, {opt.min_height, opt.separation_fraction * fine});
  for (const auto& p : report.peaks) {
    report.peak_periods.push_back(fine > 0.0 ? local_period(series, p.time, opt.period_window * fine,
                                                            {opt.min_height, opt.separation_fraction * fine})
                                             : std::nullopt);
  }

  for (const auto& cand : detail::revival_candidates(scales, opt)) {
    if (cand.time > series.t_max()) continue;
    Identification id;
    id.label = cand.label;
    id.predicted_time = cand.time;
    id.predicted_period = cand.period;
    const PeakOptions popt{opt.min_height, opt.separation_fraction * cand.period};
    const auto train = detect_peaks(series, popt, cand.time - cand.period, cand.time + cand.period);
    if (!train.empty()) {
      const Peak* left = nullptr;
      const Peak* right = nullptr;
      const Peak* nearest = &train.front();
      for (const auto& p : train) {
        if (std::abs(p.time - cand.time) < std::abs(nearest->time - cand.time)) nearest = &p;
        if (p.time <= cand.time) left = &p;
        if (p.time > cand.time && !right) right = &p;
      }
      const double tol = std::max(2.0 * dt, 0.5 * cand.period);
      if (std::abs(nearest->time - cand.time) <= 2.0 * dt) {
        id.detected_time = nearest->time;
        id.height = nearest->height;
      } else if (left && right &&
                 std::abs(left->height - right->height) <= opt.pair_tolerance * std::max(left->height, right->height)) {
        id.detected_time = 0.5 * (left->time + right->time);
        id.height = 0.5 * (left->height + right->height);
      } else {
        id.detected_time = nearest->time;
        id.height = nearest->height;
      }
      id.found = std::abs(id.detected_time - cand.time) <= tol;
      if (id.found) id.detected_period = local_period(series, id.detected_time, opt.period_window * cand.period, popt);
    }
    report.identified.push_back(std::move(id));
  }
  return report;
}

}  // namespace revival

#endif  // REVIVAL_AUTOCORR_HPP
