#pragma once

/// \file
/// Parameter sweeps over E (or over U at fixed E), figure presets and the
/// physical-unit conversion used by the command-line front end.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "kleinzone/errors.hpp"
#include "kleinzone/transmission.hpp"

namespace kleinzone {

/// m = 0.51 MeV and 1/m = 0.024 Angstrom, the constants the figures are quoted in.
namespace units {
constexpr double kMassMeV = 0.51;
constexpr double kLengthAngstrom = 0.024;

inline double energy_from_mev(double e) { return e / kMassMeV; }
inline double length_from_angstrom(double x) { return x / kLengthAngstrom; }
}  // namespace units

enum class Sweep { Energy, Height };
enum class Geometry { Step, Barrier };

inline const char* to_string(Sweep s) { return s == Sweep::Energy ? "energy" : "height"; }
inline const char* to_string(Geometry g) { return g == Geometry::Step ? "step" : "barrier"; }

/// Everything in units of m (energies) and 1/m (lengths).
struct ScanConfig {
  Model model = Model::Dirac;
  StepShape shape = StepShape::Rect;
  Geometry geometry = Geometry::Barrier;
  Engine engine = Engine::Analytic;
  double m = 1.0;
  double U = 8.0;
  double ell = 0.0;
  double L = 4.0;
  Sweep sweep = Sweep::Energy;
  double E = 1.2;  ///< fixed energy of a height sweep
  std::optional<double> lo, hi;  ///< sweep window; defaults to the Klein zone
  int samples = 1001;
  bool average = false;
  int precision_bits = 53;
  double tail_tolerance = 1e-14;
  int jobs = 1;
  std::string preset;  ///< informational

  void validate() const {
    if (samples < 2) throw UsageError("samples must be at least 2");
    if (jobs < 0) throw UsageError("jobs must be non-negative");
    if (!(m > 0.0) || !(U >= 0.0) || !(ell >= 0.0) || !(L >= 0.0)) {
      throw UsageError("m must be positive and U, ell, L non-negative");
    }
    if (shape == StepShape::Rect && ell != 0.0) throw UsageError("rect shape takes no edge width");
    if (shape == StepShape::Sauter && !(ell > 0.0)) throw UsageError("sauter shape needs ell > 0");
    const auto [a, b] = window();
    if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
      throw UsageError("sweep window must satisfy lo < hi");
    }
    policy().validate();
  }

  PrecisionPolicy policy() const {
    PrecisionPolicy p;
    p.significand_bits = precision_bits;
    p.tail_tolerance = tail_tolerance;
    return p;
  }

  TransmissionOptions options() const {
    TransmissionOptions o;
    o.policy = policy();
    o.engine = engine;
    return o;
  }

  /// Default window: the Klein zone pulled in by 1e-6 of its width, so that
  /// the end samples are evaluable.
  std::pair<double, double> window() const {
    if (sweep == Sweep::Energy) {
      const double inset = 1e-6 * std::max(U - 2.0 * m, 0.0);
      return {lo.value_or(m + inset), hi.value_or(U - m - inset)};
    }
    return {lo.value_or(E + m + 1e-6 * m), hi.value_or(40.0 * m)};
  }

  double grid(int k) const {
    const auto [a, b] = window();
    return k == samples - 1 ? b : a + (b - a) * k / (samples - 1);
  }

  PhysParams params_at(double x) const {
    PhysParams p;
    p.m = m;
    p.U = sweep == Sweep::Height ? x : U;
    p.E = sweep == Sweep::Energy ? x : E;
    p.ell = ell;
    p.L = geometry == Geometry::Barrier ? L : 0.0;
    return p;
  }
};

/// Presets reproducing the parameter sets of figures 5 to 10. Figures 5 and 6
/// have two panels (L = 4 and L = 6.5); figure 7 shows both models.
inline ScanConfig figure_preset(const std::string& name, int panel = 1) {
  if (panel != 1 && panel != 2) throw UsageError("panel must be 1 or 2");
  ScanConfig c;
  c.preset = name;
  if (name == "fig5" || name == "fig6") {
    c.model = name == "fig5" ? Model::KleinGordon : Model::Dirac;
    c.U = 8.0;
    c.L = panel == 1 ? 4.0 : 6.5;
    c.samples = 4001;
  } else if (name == "fig7") {
    c.model = panel == 1 ? Model::Dirac : Model::KleinGordon;
    c.geometry = Geometry::Step;
    c.sweep = Sweep::Height;
    c.E = 1.2;
    c.L = 0.0;
  } else if (name == "fig8" || name == "fig9" || name == "fig10") {
    c.shape = StepShape::Sauter;
    c.U = 3.0;
    c.ell = name == "fig10" ? 100.0 : 3.0;
    c.L = name == "fig9" ? 100.0 : 0.0;
    c.samples = name == "fig9" ? 8001 : 2001;
    c.average = name == "fig10";
  } else {
    throw UsageError("unknown figure preset '" + name + "'");
  }
  if (panel == 2 && name != "fig5" && name != "fig6" && name != "fig7") {
    throw UsageError("preset '" + name + "' has a single panel");
  }
  c.preset = panel == 1 ? name : name + "/2";
  return c;
}

struct ScanRecord {
  double E = 0.0;
  double U = 0.0;
  std::optional<TransmissionPoint> point;  ///< empty when not evaluable
  std::vector<std::string> flags;          ///< record-level (errors, out-of-zone)
  bool numeric_failure = false;
};

struct ScanResult {
  std::vector<ScanRecord> records;  ///< grid order
  std::vector<std::string> warnings;
  bool numeric_failure = false;
};

inline ScanRecord evaluate(const ScanConfig& cfg, double x) {
  const PhysParams p = cfg.params_at(x);
  ScanRecord r;
  r.E = p.E;
  r.U = p.U;
  if (!in_klein_zone(p)) {
    r.flags.emplace_back("outside klein zone");
    return r;
  }
  const auto opt = cfg.options();
  try {
    if (cfg.geometry == Geometry::Step) {
      r.point = t_step(p, cfg.model, cfg.shape, opt);
    } else if (cfg.average) {
      r.point = t_averaged(p, cfg.model, cfg.shape, opt);
    } else {
      r.point = t_barrier(p, cfg.model, cfg.shape, opt);
    }
  } catch (const OverflowError& e) {
    r.flags.emplace_back(std::string("overflow: ") + e.what());
  } catch (const PrecisionError& e) {
    r.flags.emplace_back(std::string("precision: ") + e.what());
    r.numeric_failure = true;
  } catch (const StiffnessError& e) {
    r.flags.emplace_back(std::string("stiffness: ") + e.what());
    r.numeric_failure = true;
  } catch (const DomainError& e) {
    r.flags.emplace_back(std::string("domain: ") + e.what());
  }
  return r;
}

/// Evaluate the grid on cfg.jobs workers (0: one per hardware thread).
/// Records come back in grid order whatever the scheduling.
inline ScanResult run_scan(const ScanConfig& cfg) {
  cfg.validate();
  ScanResult res;
  res.records.resize(static_cast<std::size_t>(cfg.samples));
  const auto [a, b] = cfg.window();
  if (cfg.sweep == Sweep::Energy) {
    if (!(b > cfg.m && a < cfg.U - cfg.m)) {
      res.warnings.emplace_back("energy window does not intersect the Klein zone");
    }
  } else if (!(b > cfg.E + cfg.m)) {
    res.warnings.emplace_back("height window does not reach the Klein zone (U > E + m)");
  }
  if (cfg.shape == StepShape::Sauter && cfg.model == Model::KleinGordon) {
    res.warnings.emplace_back("klein-gordon ramp served by the numeric engine");
  }

  unsigned jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                : static_cast<unsigned>(cfg.jobs);
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cfg.samples));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < cfg.samples;) {
      res.records[static_cast<std::size_t>(k)] = evaluate(cfg, cfg.grid(k));
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : res.records) res.numeric_failure |= r.numeric_failure;
  return res;
}

/// Local maxima of T on the scan grid; the independent companion of the
/// phase-based resonance count.
inline long long count_maxima(const ScanResult& scan) {
  long long n = 0;
  const auto& r = scan.records;
  auto T = [&](std::size_t k) { return r[k].point ? r[k].point->T : -1.0; };
  for (std::size_t k = 1; k + 1 < r.size(); ++k) n += T(k) > T(k - 1) && T(k) >= T(k + 1);
  return n;
}

}  // namespace kleinzone
