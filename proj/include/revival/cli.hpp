#ifndef REVIVAL_CLI_HPP
#define REVIVAL_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revival/autocorr.hpp"
#include "revival/error.hpp"
#include "revival/evolution.hpp"
#include "revival/format.hpp"
#include "revival/scenario.hpp"

namespace revival::cli {

enum class Units { AtomicUnits, Nanoseconds };

struct Options {
  std::string command;
  std::filesystem::path scenario;
  std::filesystem::path out_dir = "out";
  Units units = Units::AtomicUnits;
  Evolver evolver = Evolver::Exact;
  bool print_config = false;
  bool quiet = false;
};

namespace detail {

inline double in_units(double t, Units u) { return u == Units::Nanoseconds ? units::au_to_ns(t) : t; }
inline std::string_view unit_name(Units u) { return u == Units::Nanoseconds ? "ns" : "au"; }

inline Json scale_json(const TimeScale& s, Units u) {
  if (!s.finite()) return "unbounded";
  return in_units(s.value(), u);
}

inline std::string scale_text(const TimeScale& s, Units u) {
  return s.finite() ? format_double(in_units(s.value(), u)) + " " + std::string(unit_name(u)) : "unbounded";
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << content;
}

/// Per-scenario artifact directory with its label -> file index.
class ArtifactDir {
 public:
  ArtifactDir(const std::filesystem::path& root, std::string hash) : dir_(root / hash), hash_(std::move(hash)) {
    std::filesystem::create_directories(dir_);
    const auto index = dir_ / "index.json";
    if (std::filesystem::exists(index)) {
      std::ifstream in(index);
      try {
        const auto j = nlohmann::json::parse(in);
        if (j.contains("artifacts") && j.at("artifacts").is_object()) artifacts_ = j.at("artifacts");
      } catch (const nlohmann::json::exception&) {
        // A damaged index is rebuilt from this run's artifacts.
      }
    }
  }

  std::filesystem::path path(const std::string& file) const { return dir_ / file; }

  void add(const std::string& label, const std::string& file) { artifacts_[label] = file; }

  void save() const {
    nlohmann::json j;
    j["scenario"] = hash_;
    j["artifacts"] = artifacts_;
    write_file(dir_ / "index.json", j.dump(2) + "\n");
  }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  nlohmann::json artifacts_ = nlohmann::json::object();
};

inline int n_bar_of(const Scenario& sc) { return build_weights(sc).n_bar(); }

inline TimeScales scenario_scales(const Scenario& sc) {
  if (sc.is_free_particle()) return {};
  return time_scales(sc.spectrum(), n_bar_of(sc));
}

inline int cmd_scales(const Scenario& sc, const Options& opt, std::ostream& out) {
  const auto s = scenario_scales(sc);
  out << "scenario " << scenario_hash(sc) << "\n";
  if (sc.is_free_particle()) {
    out << "continuous spectrum: no discrete time scales\n";
    return 0;
  }
  out << "n_bar = " << s.n_bar << "\n";
  out << "T_cl  = " << scale_text(s.classical, opt.units) << "\n";
  out << "t_rev = " << scale_text(s.revival, opt.units) << "\n";
  out << "t_sr  = " << scale_text(s.superrevival, opt.units) << "\n";
  out << "class = " << to_string(classify(s)) << "\n";
  return 0;
}

inline int cmd_density(const Scenario& sc, const Options& opt, std::ostream& out) {
  const auto packet = build_packet(sc);
  if (sc.times.empty()) throw ValidationError("times: the density command needs at least one time");
  const auto grid = sc.grid.value_or(default_grid(packet));
  try {
    validate_grid(packet.basis(), grid);
  } catch (const DomainError& e) {
    throw ValidationError(std::string("grid: ") + e.what());
  }
  const auto hash = scenario_hash(sc);
  ArtifactDir dir(opt.out_dir, hash);
  for (const auto& tv : sc.times) {
    const double t = tv.resolve(packet.scales());
    auto d = evolve(packet, t, grid, opt.evolver);
    d.scenario_hash = hash;
    const std::string stem = "density_" + tv.tag();
    std::string file;
    if (grid.axes.size() == 1) {
      file = stem + ".csv";
      std::ostringstream os;
      write_density_csv(os, d);
      write_file(dir.path(file), os.str());
    } else {
      file = stem + ".json";
      auto header = binary_density_header(d, stem + ".bin");
      header["label"] = tv.label();
      write_file(dir.path(file), header.dump(2) + "\n");
      std::ostringstream os(std::ios::binary);
      write_density_payload(os, d);
      write_file(dir.path(stem + ".bin"), os.str());
    }
    dir.add("density " + tv.label(), file);
    if (!opt.quiet) out << "density t=" << format_double(t) << " (" << tv.label() << ") -> " << dir.path(file).string() << "\n";
  }
  dir.save();
  return 0;
}

inline AutocorrSeries scenario_series(const Scenario& sc) {
  if (const auto* fp = std::get_if<FreeParticle>(&sc.system)) {
    const double t_max = sc.autocorr.t_max.resolve({});
    return free_particle_autocorr(fp->p0, fp->sigma, t_max, sc.autocorr.dt.value_or(t_max / 1000.0));
  }
  const auto w = build_weights(sc);
  const auto scales = time_scales(sc.spectrum(), w.n_bar());
  const double t_max = sc.autocorr.t_max.resolve(scales);
  const double dt = sc.autocorr.dt.value_or(default_time_step(w, sc.spectrum(), scales.revival));
  return autocorr_series(w, sc.spectrum(), t_max, dt);
}

inline int cmd_autocorr(const Scenario& sc, const Options& opt, std::ostream& out) {
  const auto series = scenario_series(sc);
  const auto hash = scenario_hash(sc);
  ArtifactDir dir(opt.out_dir, hash);
  std::ostringstream os;
  os << "# units=" << unit_name(opt.units) << "\n";
  os << "# scenario=" << hash << "\n";
  os << "# dt=" << format_double(in_units(series.dt, opt.units)) << "\n";
  os << "t,A2\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << format_double(in_units(series.time(k), opt.units)) << "," << format_double(series.values[k]) << "\n";
  }
  write_file(dir.path("autocorr.csv"), os.str());
  dir.add("autocorr", "autocorr.csv");
  dir.save();
  if (!opt.quiet) out << "autocorr " << series.size() << " samples -> " << dir.path("autocorr.csv").string() << "\n";
  return 0;
}

inline Json report_json(const RevivalReport& r, const TimeScales& s, const std::string& hash, Units u) {
  Json j;
  j["scenario"] = hash;
  j["units"] = unit_name(u);
  j["scales"] = {{"T_cl", scale_json(s.classical, u)},
                 {"t_rev", scale_json(s.revival, u)},
                 {"t_sr", scale_json(s.superrevival, u)}};
  Json peaks = Json::array();
  for (std::size_t i = 0; i < r.peaks.size(); ++i) {
    Json p = {{"time", in_units(r.peaks[i].time, u)}, {"height", r.peaks[i].height}};
    p["period"] = r.peak_periods[i] ? Json(in_units(*r.peak_periods[i], u)) : Json(nullptr);
    peaks.push_back(p);
  }
  j["peaks"] = peaks;
  Json ids = Json::array();
  for (const auto& id : r.identified) {
    Json e;
    e["label"] = id.label;
    e["predicted_time"] = in_units(id.predicted_time, u);
    e["predicted_period"] = in_units(id.predicted_period, u);
    e["found"] = id.found;
    if (id.height > 0.0) {
      e["detected_time"] = in_units(id.detected_time, u);
      e["height"] = id.height;
    } else {
      e["detected_time"] = nullptr;
      e["height"] = nullptr;
    }
    e["detected_period"] = id.detected_period ? Json(in_units(*id.detected_period, u)) : Json(nullptr);
    ids.push_back(e);
  }
  j["identified"] = ids;
  return j;
}

inline int cmd_report(const Scenario& sc, const Options& opt, std::ostream& out) {
  const auto series = scenario_series(sc);
  const auto hash = scenario_hash(sc);
  ReportOptions ropt;
  ropt.min_height = sc.autocorr.min_height;
  const auto report = revival_report(series, series.scales, ropt);
  ArtifactDir dir(opt.out_dir, hash);
  write_file(dir.path("report.json"), report_json(report, series.scales, hash, opt.units).dump(2) + "\n");
  dir.add("report", "report.json");
  dir.save();
  if (opt.quiet) return 0;

  const auto u = unit_name(opt.units);
  out << std::left << std::setw(12) << "label" << std::setw(24) << std::string("predicted [") + std::string(u) + "]"
      << std::setw(24) << "detected" << std::setw(12) << "height" << std::setw(24) << "period" << "found\n";
  for (const auto& id : report.identified) {
    const bool seen = id.height > 0.0;
    out << std::setw(12) << id.label << std::setw(24) << format_double(in_units(id.predicted_time, opt.units))
        << std::setw(24) << (seen ? format_double(in_units(id.detected_time, opt.units)) : "-") << std::setw(12)
        << (seen ? format_double(std::round(id.height * 1e4) / 1e4) : "-") << std::setw(24)
        << (id.detected_period ? format_double(in_units(*id.detected_period, opt.units)) : "-")
        << (id.found ? "yes" : "no") << "\n";
  }
  out << report.peaks.size() << " peaks above " << format_double(ropt.min_height) << "; report -> "
      << dir.path("report.json").string() << "\n";
  return 0;
}

}  // namespace detail

/// Executes one parsed command; returns the process exit status.
inline int execute(const Options& opt, std::ostream& out, std::ostream& err) {
  Scenario sc;
  try {
    sc = load_scenario(opt.scenario);
    if (opt.print_config) {
      out << to_json(sc).dump(2) << "\n";
      if (opt.command.empty()) return 0;
    }
    if (opt.command == "scales") return detail::cmd_scales(sc, opt, out);
    if (opt.command == "density") return detail::cmd_density(sc, opt, out);
    if (opt.command == "autocorr") return detail::cmd_autocorr(sc, opt, out);
    if (opt.command == "report") return detail::cmd_report(sc, opt, out);
    err << "error: no command given (expected scales, density, autocorr or report)\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << opt.scenario.string();
    if (e.line() > 0) err << ":" << e.line();
    err << ": " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

/// Parses argv and runs. argv[0] is the program name.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wave-packet revival simulator"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  Options opt;
  std::string units = "au";
  std::string evolver = "exact";
  app.add_option("--scenario", opt.scenario, "Scenario JSON file")->required();
  app.add_option("--out", opt.out_dir, "Output root; artifacts go to <out>/<scenario hash>/");
  app.add_option("--units", units, "Time units for printed and tabulated times")
      ->check(CLI::IsMember({"au", "ns"}));
  app.add_option("--evolver", evolver, "Density propagator")->check(CLI::IsMember({"exact", "third-order"}));
  app.add_flag("--print-config", opt.print_config, "Echo the canonical scenario JSON");
  app.add_flag("--quiet", opt.quiet, "Suppress progress output");
  for (const char* name : {"scales", "density", "autocorr", "report"}) {
    app.add_subcommand(name, std::string(name) == "scales"     ? "Print time scales and revival class"
                             : std::string(name) == "density"  ? "Write probability densities at the listed times"
                             : std::string(name) == "autocorr" ? "Write the autocorrelation series"
                                                               : "Identify revivals in the autocorrelation");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (const auto subs = app.get_subcommands(); !subs.empty()) opt.command = subs.front()->get_name();
  opt.units = units == "ns" ? Units::Nanoseconds : Units::AtomicUnits;
  opt.evolver = evolver == "third-order" ? Evolver::ThirdOrder : Evolver::Exact;
  if (opt.command.empty() && !opt.print_config) {
    err << "error: no command given (expected scales, density, autocorr or report)\n";
    return 2;
  }
  return execute(opt, out, err);
}

}  // namespace revival::cli

#endif  // REVIVAL_CLI_HPP
