#ifndef REVIVAL_SCENARIO_HPP
#define REVIVAL_SCENARIO_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "revival/autocorr.hpp"
#include "revival/eigenbasis.hpp"
#include "revival/error.hpp"
#include "revival/evolution.hpp"
#include "revival/format.hpp"
#include "revival/grid.hpp"
#include "revival/spectra.hpp"
#include "revival/units.hpp"
#include "revival/weights.hpp"

namespace revival {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Symbolic times: "<rational> [<scale>] [mod <scale>]", e.g. "1/4 t_rev",
// "T_cl mod t_rev", "0 mod T_cl", "10.5 ns".

enum class ScaleName { T_cl, t_rev, t_sr };

inline std::string_view to_string(ScaleName s) {
  switch (s) {
    case ScaleName::T_cl: return "T_cl";
    case ScaleName::t_rev: return "t_rev";
    case ScaleName::t_sr: return "t_sr";
  }
  return "?";
}

struct SymbolicTime {
  double factor = 0.0;
  std::optional<ScaleName> scale;
  bool nanoseconds = false;  ///< factor is in ns rather than a.u.
  std::optional<ScaleName> modulus;
};

namespace detail {

inline std::optional<ScaleName> parse_scale_name(std::string_view tok) {
  if (tok == "T_cl") return ScaleName::T_cl;
  if (tok == "t_rev") return ScaleName::t_rev;
  if (tok == "t_sr") return ScaleName::t_sr;
  return std::nullopt;
}

inline std::optional<double> parse_number(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  double v = 0.0;
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  if (*b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) return std::nullopt;
  return v;
}

inline std::optional<double> parse_rational(std::string_view tok) {
  const auto slash = tok.find('/');
  if (slash == std::string_view::npos) return parse_number(tok);
  const auto num = parse_number(tok.substr(0, slash));
  const auto den = parse_number(tok.substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

/// Throws ValidationError for text outside the grammar.
inline SymbolicTime parse_time(std::string_view text) {
  const auto tokens = detail::split_ws(text);
  auto fail = [&](const std::string& why) -> ValidationError {
    return ValidationError("time \"" + std::string(text) + "\": " + why);
  };
  if (tokens.empty()) throw fail("empty time");
  SymbolicTime out;
  std::size_t i = 0;
  if (const auto r = detail::parse_rational(tokens[0])) {
    out.factor = *r;
    ++i;
  } else {
    out.factor = 1.0;
  }
  if (i < tokens.size() && tokens[i] != "mod") {
    if (const auto s = detail::parse_scale_name(tokens[i])) {
      out.scale = s;
    } else if (tokens[i] == "ns") {
      out.nanoseconds = true;
    } else if (tokens[i] != "au" && tokens[i] != "a.u.") {
      throw fail("unknown unit or scale '" + tokens[i] + "'");
    }
    ++i;
  } else if (i == 0) {
    throw fail("expected a number or a time scale");
  }
  if (i < tokens.size()) {
    if (tokens[i] != "mod" || i + 1 >= tokens.size()) throw fail("expected 'mod <scale>'");
    const auto m = detail::parse_scale_name(tokens[i + 1]);
    if (!m) throw fail("unknown scale '" + tokens[i + 1] + "' after mod");
    out.modulus = m;
    i += 2;
  }
  if (i != tokens.size()) throw fail("unexpected trailing text '" + tokens[i] + "'");
  return out;
}

inline double scale_value(const TimeScales& s, ScaleName name) {
  const TimeScale& ts = name == ScaleName::T_cl ? s.classical : name == ScaleName::t_rev ? s.revival : s.superrevival;
  if (!ts.finite()) {
    throw ValidationError("time scale " + std::string(to_string(name)) + " is unbounded for this scenario");
  }
  return ts.value();
}

/// Absolute time in a.u.
inline double resolve_time(const SymbolicTime& st, const TimeScales& scales) {
  double t = st.factor;
  if (st.scale) t *= scale_value(scales, *st.scale);
  if (st.nanoseconds) t = units::ns_to_au(t);
  if (st.modulus) {
    const double m = scale_value(scales, *st.modulus);
    t = std::fmod(t, m);
    if (t < 0.0) t += m;
  }
  return t;
}

/// A scenario time as written: either a bare number (a.u.) or grammar text.
struct TimeValue {
  std::variant<double, std::string> value;

  double resolve(const TimeScales& scales) const {
    if (const auto* d = std::get_if<double>(&value)) return *d;
    return resolve_time(parse_time(std::get<std::string>(value)), scales);
  }

  std::string label() const {
    if (const auto* d = std::get_if<double>(&value)) return format_double(*d);
    return std::get<std::string>(value);
  }

  /// File-name friendly form of the label.
  std::string tag() const {
    std::string out;
    for (char c : label()) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') out.push_back(c);
      else if (c == '/') out.push_back('o');
      else if (c == ' ') out.push_back('_');
    }
    return out;
  }

  bool operator==(const TimeValue&) const = default;
};

// ---------------------------------------------------------------------------
// Scenario

struct FreeParticle {
  double p0 = 0.0;
  double sigma = 1.0;
  bool operator==(const FreeParticle&) const = default;
};

struct GaussianSpec {
  int n_bar = 0;
  double sigma = 1.0;
  double mass_tol = default_mass_tolerance;
  bool operator==(const GaussianSpec&) const = default;
};

struct CoherentSpec {
  std::complex<double> alpha;
  int n_cap = 0;
  bool operator==(const CoherentSpec&) const = default;
};

struct CustomSpec {
  std::vector<std::pair<int, std::complex<double>>> pairs;
  bool operator==(const CustomSpec&) const = default;
};

using WeightSpec = std::variant<GaussianSpec, CoherentSpec, CustomSpec>;

struct AutocorrSpec {
  TimeValue t_max{1.0};
  std::optional<double> dt;  ///< empty: default step
  double min_height = 0.1;
  bool operator==(const AutocorrSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::variant<Spectrum, FreeParticle> system{Spectrum(Hydrogen{})};
  std::optional<EigenBasis> basis;
  std::optional<WeightSpec> weights;
  std::vector<TimeValue> times;
  std::optional<GridSpec> grid;  ///< empty: default grid
  AutocorrSpec autocorr;
  std::vector<std::string> outputs;

  bool is_free_particle() const { return std::holds_alternative<FreeParticle>(system); }
  const Spectrum& spectrum() const { return std::get<Spectrum>(system); }

  bool operator==(const Scenario&) const = default;
};

namespace detail {

/// 1-based line of the value at `path` within `text`, or 0. Keys are looked
/// up in order, each search starting after the previous match; array indices
/// are skipped.
inline int locate_line(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  bool any = false;
  for (const auto& key : path) {
    if (!key.empty() && std::isdigit(static_cast<unsigned char>(key[0]))) continue;
    const auto hit = text.find("\"" + key + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit + 1;
    any = true;
  }
  if (!any) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
 public:
  Reader(const std::string& text, std::filesystem::path base) : text_(text), base_(std::move(base)) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& why) const {
    std::string dotted;
    for (const auto& p : path) dotted += (dotted.empty() ? "" : ".") + p;
    throw ValidationError(dotted + ": " + why, locate_line(text_, path));
  }

  const Json& require(const Json& obj, const std::vector<std::string>& path) const {
    const auto& key = path.back();
    if (!obj.is_object() || !obj.contains(key)) fail(path, "missing required field");
    return obj.at(key);
  }

  double number(const Json& obj, std::vector<std::string> path, std::optional<double> fallback = {}) const {
    const auto& key = path.back();
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      fail(path, "missing required field");
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  int integer(const Json& obj, std::vector<std::string> path, std::optional<int> fallback = {}) const {
    const auto& key = path.back();
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      fail(path, "missing required field");
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
  }

  std::string string(const Json& obj, std::vector<std::string> path) const {
    const auto& v = require(obj, path);
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  std::string read_file(const std::vector<std::string>& path, const std::string& name) const {
    const auto full = std::filesystem::path(name).is_absolute() ? std::filesystem::path(name) : base_ / name;
    std::ifstream in(full);
    if (!in) fail(path, "cannot open '" + full.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  const std::string& text() const { return text_; }

 private:
  const std::string& text_;
  std::filesystem::path base_;
};

/// Numeric rows of a CSV file; blank lines, '#' comments and a non-numeric
/// header row are skipped.
inline std::vector<std::vector<double>> parse_csv_rows(const std::string& content, std::size_t columns,
                                                       const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const auto v = b == std::string::npos ? std::nullopt : parse_number(std::string_view(cell).substr(b, e - b + 1));
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw ValidationError(what + " line " + std::to_string(line_no) + ": non-numeric cell", line_no);
    }
    if (row.size() != columns) {
      throw ValidationError(what + " line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                                " columns, found " + std::to_string(row.size()),
                            line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline int as_quantum_number(double v, const std::string& what) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(what + ": quantum number must be an integer");
  return static_cast<int>(v);
}

inline EigenBasis basis_from_name(const Reader& r, const std::string& name, const std::vector<std::string>& path) {
  if (name == "sho") return EigenBasis(ShoBasis{});
  if (name == "box") return EigenBasis(BoxBasis{});
  if (name == "rotator") return EigenBasis(RotatorBasis{});
  if (name == "circular") return EigenBasis(CircularBasis{});
  r.fail(path, "unknown basis '" + name + "' (expected sho, box, rotator or circular)");
}

inline std::optional<EigenBasis> natural_basis(const Spectrum& s) {
  switch (s.kind()) {
    case SpectrumKind::HarmonicOscillator:
      if (s.get_if<HarmonicOscillator>()->dimension != 1) return std::nullopt;
      return EigenBasis(ShoBasis{s.get_if<HarmonicOscillator>()->omega});
    case SpectrumKind::InfiniteWell: return EigenBasis(BoxBasis{s.get_if<InfiniteWell>()->length});
    case SpectrumKind::RigidRotator: return EigenBasis(RotatorBasis{});
    case SpectrumKind::Hydrogen: return EigenBasis(CircularBasis{});
    default: return std::nullopt;
  }
}

inline TimeValue read_time(const Reader& r, const Json& v, const std::vector<std::string>& path,
                           bool validate_grammar = true) {
  if (v.is_number()) return TimeValue{v.get<double>()};
  if (!v.is_string()) r.fail(path, "expected a number or a time string");
  const auto text = v.get<std::string>();
  if (validate_grammar) {
    try {
      parse_time(text);
    } catch (const ValidationError& e) {
      r.fail(path, e.what());
    }
  }
  return TimeValue{text};
}

inline Axis read_axis(const Reader& r, const Json& a, std::vector<std::string> path) {
  if (!a.is_object()) r.fail(path, "expected an axis object");
  Axis axis;
  auto p = path;
  p.push_back("name");
  axis.name = a.contains("name") ? r.string(a, p) : "x";
  p.back() = "min";
  axis.min = r.number(a, p);
  p.back() = "max";
  axis.max = r.number(a, p);
  p.back() = "count";
  const int count = r.integer(a, p);
  if (count < 2) r.fail(p, "need at least two points");
  axis.count = static_cast<std::size_t>(count);
  if (a.contains("periodic")) {
    if (!a.at("periodic").is_boolean()) r.fail({path.front(), "periodic"}, "expected true or false");
    axis.periodic = a.at("periodic").get<bool>();
  }
  if (!(axis.max > axis.min)) r.fail(path, "max must exceed min");
  return axis;
}

}  // namespace detail

/// Parses scenario JSON. Relative CSV paths resolve against `base_dir`.
/// Throws ValidationError carrying the offending line where it can be traced.
inline Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".") {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    throw ValidationError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object", 1);
  const detail::Reader r(text, base_dir);
  Scenario sc;
  if (doc.contains("name")) sc.name = r.string(doc, {"name"});

  // System.
  const auto& sys = r.require(doc, {"system"});
  if (!sys.is_object()) r.fail({"system"}, "expected an object");
  const auto kind = r.string(sys, {"system", "kind"});
  try {
    if (kind == "sho") {
      sc.system = Spectrum(HarmonicOscillator{r.number(sys, {"system", "omega"}, 1.0),
                                              r.integer(sys, {"system", "D"}, 1)});
    } else if (kind == "well") {
      sc.system = Spectrum(InfiniteWell{r.number(sys, {"system", "L"}, 1.0)});
    } else if (kind == "rotator") {
      sc.system = Spectrum(RigidRotator{r.number(sys, {"system", "I"}, 1.0)});
    } else if (kind == "hydrogen") {
      sc.system = Spectrum(Hydrogen{});
    } else if (kind == "polynomial") {
      sc.system = Spectrum(Polynomial{r.number(sys, {"system", "A"}, 0.0), r.number(sys, {"system", "B"}, 0.0),
                                      r.number(sys, {"system", "C"}, 0.0), r.integer(sys, {"system", "n_min"}, 0)});
    } else if (kind == "table") {
      std::vector<std::pair<int, double>> points;
      if (sys.contains("csv")) {
        const auto file = r.string(sys, {"system", "csv"});
        for (const auto& row : detail::parse_csv_rows(r.read_file({"system", "csv"}, file), 2, file)) {
          points.emplace_back(detail::as_quantum_number(row[0], file), row[1]);
        }
      } else {
        const auto& values = r.require(sys, {"system", "values"});
        if (!values.is_array()) r.fail({"system", "values"}, "expected an array of [n, E] pairs");
        for (const auto& v : values) {
          if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number()) {
            r.fail({"system", "values"}, "expected [n, E] pairs with integer n");
          }
          points.emplace_back(v[0].get<int>(), v[1].get<double>());
        }
      }
      sc.system = Spectrum(Tabulated(std::move(points)));
    } else if (kind == "free") {
      FreeParticle fp{r.number(sys, {"system", "p0"}), r.number(sys, {"system", "sigma"})};
      if (!(fp.sigma > 0.0)) r.fail({"system", "sigma"}, "must be positive");
      sc.system = fp;
    } else {
      r.fail({"system", "kind"}, "unknown system '" + kind +
                                     "' (expected sho, well, rotator, hydrogen, polynomial, table or free)");
    }
  } catch (const DomainError& e) {
    r.fail({"system"}, e.what());
  }

  // Basis.
  if (doc.contains("basis")) {
    const auto name = r.string(doc, {"basis"});
    EigenBasis b = detail::basis_from_name(r, name, {"basis"});
    if (!sc.is_free_particle()) {
      // Adopt the spectrum's own parameters where the basis has any.
      if (const auto nb = detail::natural_basis(sc.spectrum()); nb && nb->kind() == b.kind()) b = *nb;
      if (!detail::spectrum_matches_basis(sc.spectrum(), b)) {
        r.fail({"basis"}, "'" + name + "' does not match system kind '" + kind + "'");
      }
    }
    sc.basis = b;
  } else if (!sc.is_free_particle()) {
    sc.basis = detail::natural_basis(sc.spectrum());
  }

  // Weights.
  if (doc.contains("weights")) {
    const auto& w = doc.at("weights");
    if (!w.is_object()) r.fail({"weights"}, "expected an object");
    const auto wk = r.string(w, {"weights", "kind"});
    if (wk == "gaussian") {
      GaussianSpec g{r.integer(w, {"weights", "n_bar"}), r.number(w, {"weights", "sigma"}),
                     r.number(w, {"weights", "mass_tol"}, default_mass_tolerance)};
      if (!(g.sigma > 0.0)) r.fail({"weights", "sigma"}, "must be positive");
      if (!(g.mass_tol > 0.0 && g.mass_tol < 1.0)) r.fail({"weights", "mass_tol"}, "must lie in (0, 1)");
      sc.weights = g;
    } else if (wk == "coherent") {
      const auto& a = r.require(w, {"weights", "alpha"});
      std::complex<double> alpha;
      if (a.is_number()) {
        alpha = a.get<double>();
      } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
        alpha = {a[0].get<double>(), a[1].get<double>()};
      } else {
        r.fail({"weights", "alpha"}, "expected a number or [re, im]");
      }
      sc.weights = CoherentSpec{alpha, r.integer(w, {"weights", "n_cap"})};
    } else if (wk == "custom") {
      CustomSpec cs;
      if (w.contains("csv")) {
        const auto file = r.string(w, {"weights", "csv"});
        for (const auto& row : detail::parse_csv_rows(r.read_file({"weights", "csv"}, file), 3, file)) {
          cs.pairs.emplace_back(detail::as_quantum_number(row[0], file), std::complex<double>(row[1], row[2]));
        }
      } else {
        const auto& pairs = r.require(w, {"weights", "pairs"});
        if (!pairs.is_array()) r.fail({"weights", "pairs"}, "expected an array of [n, re, im]");
        for (const auto& p : pairs) {
          if (!p.is_array() || p.size() < 2 || p.size() > 3 || !p[0].is_number_integer() || !p[1].is_number() ||
              (p.size() == 3 && !p[2].is_number())) {
            r.fail({"weights", "pairs"}, "expected [n, re] or [n, re, im] with integer n");
          }
          cs.pairs.emplace_back(p[0].get<int>(),
                                std::complex<double>(p[1].get<double>(), p.size() == 3 ? p[2].get<double>() : 0.0));
        }
      }
      if (cs.pairs.empty()) r.fail({"weights", "pairs"}, "need at least one coefficient");
      sc.weights = cs;
    } else {
      r.fail({"weights", "kind"}, "unknown weights '" + wk + "' (expected gaussian, coherent or custom)");
    }
  } else if (!sc.is_free_particle()) {
    r.fail({"weights"}, "missing required field");
  }

  // Times.
  if (doc.contains("times")) {
    const auto& ts = doc.at("times");
    if (!ts.is_array()) r.fail({"times"}, "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) sc.times.push_back(detail::read_time(r, ts[i], {"times"}));
  }

  // Grid.
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (g.is_string()) {
      if (g.get<std::string>() != "default") r.fail({"grid"}, "expected \"default\" or a list of axes");
    } else if (g.is_array()) {
      GridSpec spec;
      for (const auto& a : g) spec.axes.push_back(detail::read_axis(r, a, {"grid"}));
      if (spec.axes.empty() || spec.axes.size() > 2) r.fail({"grid"}, "need one or two axes");
      sc.grid = spec;
    } else {
      r.fail({"grid"}, "expected \"default\" or a list of axes");
    }
  }

  // Autocorrelation settings.
  if (doc.contains("autocorr")) {
    const auto& a = doc.at("autocorr");
    if (!a.is_object()) r.fail({"autocorr"}, "expected an object");
    if (a.contains("t_max")) sc.autocorr.t_max = detail::read_time(r, a.at("t_max"), {"autocorr", "t_max"});
    if (a.contains("dt")) {
      const auto& dt = a.at("dt");
      if (dt.is_number()) {
        if (!(dt.get<double>() > 0.0)) r.fail({"autocorr", "dt"}, "must be positive");
        sc.autocorr.dt = dt.get<double>();
      } else if (!(dt.is_string() && dt.get<std::string>() == "default")) {
        r.fail({"autocorr", "dt"}, "expected a positive number or \"default\"");
      }
    }
    sc.autocorr.min_height = r.number(a, {"autocorr", "min_height"}, 0.1);
    if (!(sc.autocorr.min_height > 0.0 && sc.autocorr.min_height < 1.0)) {
      r.fail({"autocorr", "min_height"}, "must lie in (0, 1)");
    }
  }

  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    if (!o.is_array()) r.fail({"outputs"}, "expected an array");
    for (const auto& v : o) {
      if (!v.is_string()) r.fail({"outputs"}, "expected strings");
      const auto s = v.get<std::string>();
      if (s != "density" && s != "autocorr" && s != "report") {
        r.fail({"outputs"}, "unknown output '" + s + "' (expected density, autocorr or report)");
      }
      sc.outputs.push_back(s);
    }
  }
  return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

namespace detail {

inline Json time_json(const TimeValue& t) {
  if (const auto* d = std::get_if<double>(&t.value)) return *d;
  return std::get<std::string>(t.value);
}

}  // namespace detail

/// Canonical JSON form; tables and custom weights are written inline so the
/// result re-parses without the original CSV files.
inline Json to_json(const Scenario& sc) {
  Json j;
  if (!sc.name.empty()) j["name"] = sc.name;
  Json sys;
  if (const auto* fp = std::get_if<FreeParticle>(&sc.system)) {
    sys = {{"kind", "free"}, {"p0", fp->p0}, {"sigma", fp->sigma}};
  } else {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, HarmonicOscillator>) {
            sys = {{"kind", "sho"}, {"omega", s.omega}, {"D", s.dimension}};
          } else if constexpr (std::is_same_v<S, InfiniteWell>) {
            sys = {{"kind", "well"}, {"L", s.length}};
          } else if constexpr (std::is_same_v<S, RigidRotator>) {
            sys = {{"kind", "rotator"}, {"I", s.inertia}};
          } else if constexpr (std::is_same_v<S, Hydrogen>) {
            sys = {{"kind", "hydrogen"}};
          } else if constexpr (std::is_same_v<S, Polynomial>) {
            sys = {{"kind", "polynomial"}, {"A", s.a}, {"B", s.b}, {"C", s.c}, {"n_min", s.n_min}};
          } else {
            Json values = Json::array();
            for (int n = s.first(); n <= s.last(); ++n) values.push_back({n, s.at(n)});
            sys = {{"kind", "table"}, {"values", values}};
          }
        },
        sc.spectrum().law());
  }
  j["system"] = sys;
  if (sc.basis) j["basis"] = std::string(to_string(sc.basis->kind()));
  if (sc.weights) {
    std::visit(
        [&](const auto& w) {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, GaussianSpec>) {
            j["weights"] = {{"kind", "gaussian"}, {"n_bar", w.n_bar}, {"sigma", w.sigma}, {"mass_tol", w.mass_tol}};
          } else if constexpr (std::is_same_v<W, CoherentSpec>) {
            j["weights"] = {{"kind", "coherent"}, {"alpha", {w.alpha.real(), w.alpha.imag()}}, {"n_cap", w.n_cap}};
          } else {
            Json pairs = Json::array();
            for (const auto& [n, c] : w.pairs) pairs.push_back({n, c.real(), c.imag()});
            j["weights"] = {{"kind", "custom"}, {"pairs", pairs}};
          }
        },
        *sc.weights);
  }
  Json times = Json::array();
  for (const auto& t : sc.times) times.push_back(detail::time_json(t));
  j["times"] = times;
  if (sc.grid) {
    Json axes = Json::array();
    for (const auto& a : sc.grid->axes) {
      axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"periodic", a.periodic}});
    }
    j["grid"] = axes;
  } else {
    j["grid"] = "default";
  }
  Json ac;
  ac["t_max"] = detail::time_json(sc.autocorr.t_max);
  if (sc.autocorr.dt) ac["dt"] = *sc.autocorr.dt;
  else ac["dt"] = "default";
  ac["min_height"] = sc.autocorr.min_height;
  j["autocorr"] = ac;
  j["outputs"] = sc.outputs;
  return j;
}

/// Stable identifier derived from the canonical form.
inline std::string scenario_hash(const Scenario& sc) { return fnv1a_hex(to_json(sc).dump()); }

inline WeightDistribution build_weights(const Scenario& sc) {
  if (!sc.weights) throw ValidationError("scenario has no weights");
  const Spectrum& s = sc.spectrum();
  try {
    return std::visit(
        [&](const auto& w) -> WeightDistribution {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, GaussianSpec>) {
            auto floor = s.n_min();
            if (sc.basis) {
              if (const auto b = sc.basis->n_min(); b && (!floor || *b > *floor)) floor = b;
            }
            return gaussian_weights(w.n_bar, w.sigma, floor, w.mass_tol);
          } else if constexpr (std::is_same_v<W, CoherentSpec>) {
            return coherent_weights(w.alpha, w.n_cap);
          } else {
            return custom_weights(w.pairs);
          }
        },
        *sc.weights);
  } catch (const DomainError& e) {
    throw ValidationError(std::string("weights: ") + e.what());
  }
}

inline WavePacket build_packet(const Scenario& sc) {
  if (sc.is_free_particle()) throw ValidationError("the free-particle system has no position-space packet");
  if (!sc.basis) {
    throw ValidationError("system '" + std::string(to_string(sc.spectrum().kind())) +
                          "' needs an explicit \"basis\" for densities");
  }
  try {
    return WavePacket(sc.spectrum(), *sc.basis, build_weights(sc));
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

}  // namespace revival

#endif  // REVIVAL_SCENARIO_HPP
