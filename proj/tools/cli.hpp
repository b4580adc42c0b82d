#pragma once

// Command-line front end: scan, figure, resonances, asymptotic.
// stdout carries data, stderr warnings. Exit codes: 0 ok, 2 usage, 3 numeric failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinzone/errors.hpp"
#include "kleinzone/io.hpp"
#include "kleinzone/scan.hpp"
#include "kleinzone/transmission.hpp"

namespace kleinzone::cli {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

struct Options {
  std::string model, shape, geometry, engine, sweep, units = "natural", format = "csv", preset;
  std::optional<double> U, ell, L, E, lo, hi;
  std::optional<int> samples, precision_bits, jobs;
  std::optional<double> tolerance;
  int panel = 1;
  bool average = false;
  int maxima_samples = 0;
};

inline void add_common(CLI::App* app, Options& o, bool with_preset) {
  const std::vector<std::string> models{"dirac", "klein-gordon", "kg"};
  app->add_option("--model", o.model, "dirac | klein-gordon")->check(CLI::IsMember(models));
  app->add_option("--shape", o.shape, "rect | sauter")->check(CLI::IsMember({"rect", "sauter"}));
  app->add_option("--geometry", o.geometry, "step | barrier")
      ->check(CLI::IsMember({"step", "barrier"}));
  app->add_option("--engine", o.engine, "analytic | numeric")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  app->add_option("--sweep", o.sweep, "energy | height")->check(CLI::IsMember({"energy", "height"}));
  app->add_option("-U,--U", o.U, "barrier height");
  app->add_option("--ell", o.ell, "edge width");
  app->add_option("-L,--L", o.L, "half-width of the flat top");
  app->add_option("-E,--E", o.E, "energy (fixed energy of a height sweep)");
  app->add_option("--lo,--E-min", o.lo, "start of the sweep window");
  app->add_option("--hi,--E-max", o.hi, "end of the sweep window");
  app->add_option("--samples", o.samples, "grid points (>= 2)");
  app->add_flag("--average", o.average, "also emit the energy-averaged T");
  app->add_option("--precision-bits", o.precision_bits, "starting rung: 53, 106, 159 or 212");
  app->add_option("--tolerance", o.tolerance, "relative tolerance of the special functions");
  app->add_option("-j,--jobs", o.jobs, "worker threads (0: all cores)");
  app->add_option("--units", o.units, "natural (m = 1) | physical (MeV, Angstrom)")
      ->check(CLI::IsMember({"natural", "physical"}));
  app->add_option("--panel", o.panel, "second panel of fig5/fig6/fig7");
  if (with_preset) {
    app->add_option("--preset", o.preset, "start from a figure preset");
  }
}

inline ScanConfig build_config(const Options& o) {
  ScanConfig c = o.preset.empty() ? ScanConfig{} : figure_preset(o.preset, o.panel);
  const bool phys = o.units == "physical";
  auto energy = [&](double v) { return phys ? units::energy_from_mev(v) : v; };
  auto length = [&](double v) { return phys ? units::length_from_angstrom(v) : v; };
  if (!o.model.empty()) c.model = o.model == "dirac" ? Model::Dirac : Model::KleinGordon;
  if (!o.shape.empty()) c.shape = o.shape == "rect" ? StepShape::Rect : StepShape::Sauter;
  if (!o.geometry.empty()) c.geometry = o.geometry == "step" ? Geometry::Step : Geometry::Barrier;
  if (!o.engine.empty()) c.engine = o.engine == "analytic" ? Engine::Analytic : Engine::Numeric;
  if (!o.sweep.empty()) c.sweep = o.sweep == "energy" ? Sweep::Energy : Sweep::Height;
  if (o.U) c.U = energy(*o.U);
  if (o.ell) c.ell = length(*o.ell);
  if (o.L) c.L = length(*o.L);
  if (o.E) c.E = energy(*o.E);
  if (o.lo) c.lo = energy(*o.lo);
  if (o.hi) c.hi = energy(*o.hi);
  if (o.samples) c.samples = *o.samples;
  if (o.average) c.average = true;
  if (o.precision_bits) c.precision_bits = *o.precision_bits;
  if (o.tolerance) c.tail_tolerance = *o.tolerance;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.shape == "sauter" && !o.ell && c.ell == 0.0) {
    throw UsageError("sauter shape needs --ell");
  }
  if (o.shape == "rect") c.ell = 0.0;
  return c;
}

inline void emit_warnings(std::ostream& err, const std::vector<std::string>& w) {
  for (const auto& s : w) err << "warning: " << s << "\n";
}

inline int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const ScanConfig cfg = build_config(o);
  const ScanResult res = run_scan(cfg);
  emit_warnings(err, res.warnings);
  if (o.format == "json") {
    out << io::scan_json(cfg, res, o.units);
  } else {
    io::write_csv(out, cfg, res);
  }
  if (res.numeric_failure) {
    err << "error: numeric failure at one or more grid points (see flags)\n";
    return kNumeric;
  }
  return kOk;
}

inline int cmd_resonances(const Options& o, std::ostream& out, std::ostream& err) {
  ScanConfig cfg = build_config(o);
  cfg.validate();
  if (cfg.geometry != Geometry::Barrier || cfg.sweep != Sweep::Energy) {
    throw UsageError("resonances are defined for barrier energy sweeps");
  }
  const auto [lo, hi] = cfg.window();
  const PhysParams base = cfg.params_at(lo);
  const auto opt = cfg.options();
  const auto rep = find_resonances(base, cfg.model, cfg.shape, lo, hi, opt);
  const long long spikes = spike_density(base, cfg.model, cfg.shape, lo, hi, opt);
  std::vector<std::string> warnings;
  if (!(rep.window.second > rep.window.first)) {
    warnings.emplace_back("window does not intersect the Klein zone");
  }
  std::optional<long long> maxima;
  if (o.maxima_samples > 0 && rep.window.second > rep.window.first) {
    ScanConfig dense = cfg;
    dense.samples = o.maxima_samples;
    dense.lo = rep.window.first;
    dense.hi = rep.window.second;
    dense.average = false;
    maxima = count_maxima(run_scan(dense));
  }
  emit_warnings(err, warnings);

  io::JsonWriter j;
  j.begin_object();
  j.field("schema_version", io::kSchemaVersion);
  io::write_config(j, cfg, o.units);
  j.field("count", rep.count);
  j.key("window");
  j.begin_array();
  j.value(rep.window.first);
  j.value(rep.window.second);
  j.end_array();
  j.doubles("energies", rep.energies);
  j.doubles("transparent", rep.transparent);
  j.field("spike_density", spikes);
  j.key("maxima_scan");
  if (maxima) j.value(*maxima);
  else j.null();
  j.strings("flags", rep.flags);
  j.strings("warnings", warnings);
  j.end_object();
  out << j.str();
  return kOk;
}

inline int cmd_asymptotic(const Options& o, std::ostream& out, std::ostream& err) {
  ScanConfig cfg = build_config(o);
  if (o.shape.empty()) cfg.shape = cfg.ell > 0.0 ? StepShape::Sauter : StepShape::Rect;
  PhysParams p = cfg.params_at(cfg.E);
  p.E = cfg.E;
  p.L = 0.0;
  const auto r = sauter_asymptotic(p);
  std::vector<std::string> warnings = r.warnings;
  std::optional<double> exact_step, exact_avg;
  if (cfg.model == Model::Dirac) {
    const auto pt = t_averaged(p, Model::Dirac, cfg.shape, cfg.options());
    exact_avg = pt.log10_T_avg;
    exact_step = t_step(p, Model::Dirac, cfg.shape, cfg.options()).log10_T;
  } else {
    warnings.emplace_back("asymptotic law is for the Dirac ramp; no exact comparison");
  }
  emit_warnings(err, warnings);

  io::JsonWriter j;
  j.begin_object();
  j.field("schema_version", io::kSchemaVersion);
  j.key("config");
  j.begin_object();
  j.field("units", o.units);
  j.field("m", p.m);
  j.field("E", p.E);
  j.field("U", p.U);
  j.field("ell", p.ell);
  j.end_object();
  j.field("log10_exponent", r.log10_exponent);
  j.field("prefactor", r.prefactor);
  j.field("log10_T_step", r.log10_T_step);
  j.field("log10_T_barrier_avg", r.log10_T_barrier_avg);
  j.field("field_ratio", r.field_ratio);
  j.field("restriction_satisfied", r.restriction_satisfied);
  j.field("exact_log10_T_step", exact_step);
  j.field("exact_log10_T_barrier_avg", exact_avg);
  j.strings("warnings", warnings);
  j.end_object();
  out << j.str();
  return kOk;
}

/// Parse and dispatch. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relativistic transmission through steps and barriers in the Klein zone"};
  app.require_subcommand(1);
  Options o;

  auto* scan = app.add_subcommand("scan", "sweep T over E (or U)");
  add_common(scan, o, true);
  scan->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* figure = app.add_subcommand("figure", "sweep with a figure preset");
  figure->add_option("name", o.preset, "fig5 | fig6 | fig7 | fig8 | fig9 | fig10")->required();
  add_common(figure, o, false);
  figure->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* res = app.add_subcommand("resonances", "locate transmission resonances (JSON)");
  add_common(res, o, true);
  res->add_option("--maxima-samples", o.maxima_samples,
                  "cross-check against local maxima on a grid of this size");

  auto* asym = app.add_subcommand("asymptotic", "large-ramp asymptotics (JSON)");
  add_common(asym, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (scan->parsed() || figure->parsed()) return cmd_scan(o, out, err);
    if (res->parsed()) return cmd_resonances(o, out, err);
    return cmd_asymptotic(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace kleinzone::cli
