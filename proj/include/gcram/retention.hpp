// SPDX-License-Identifier: Apache-2.0
//
// Storage-node decay after a write: WWL coupling step, hold leakage through the
// write device and read-device gate, read coupling, and retention time.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcram/cellgen.hpp"
#include "gcram/config.hpp"
#include "gcram/models.hpp"
#include "gcram/technology.hpp"
#include "gcram/text.hpp"

namespace gcram {

enum class StoredState { ZERO, ONE };

inline std::string_view to_string(StoredState s) { return s == StoredState::ONE ? "one" : "zero"; }

struct RetentionSetup {
  CellVariantSpec spec;
  const Technology* tech = nullptr;
  MemoryConfig config;  ///< vdd, temperature, write_vt_offset, level shifter
  StoredState stored_state = StoredState::ONE;
  double wbl_hold_level = 0.0;
  double coupling_ratio_wwl = 0.05;
  double coupling_ratio_rwl = 0.03;
  double c_sn = 1e-15;
  double sense_threshold = 0.55;
  double gate_leak_per_um = 0.0;

  void validate() const {
    if (!tech) throw std::invalid_argument("retention setup has no technology");
    if (!(coupling_ratio_wwl >= 0 && coupling_ratio_wwl <= 0.5) ||
        !(coupling_ratio_rwl >= 0 && coupling_ratio_rwl <= 0.5))
      throw std::invalid_argument("coupling ratio outside [0, 0.5]");
    if (!(c_sn > 0)) throw std::invalid_argument("storage capacitance must be positive");
  }
};

/// Default setup for a config. The hold bias is the worst case for the state:
/// a '1' holds against wbl = 0 and a '0' against wbl = vdd.
inline RetentionSetup make_retention_setup(const MemoryConfig& cfg, const Technology& tech,
                                           StoredState state = StoredState::ONE) {
  if (cfg.cell_variant == CellVariant::SRAM_6T) throw std::invalid_argument("sram_6t has no storage-node retention");
  RetentionSetup s;
  s.spec = variant_spec(cfg.cell_variant, tech);
  s.tech = &tech;
  s.config = cfg;
  s.stored_state = state;
  s.wbl_hold_level = state == StoredState::ONE ? 0.0 : cfg.vdd;
  s.coupling_ratio_wwl =
      cfg.cell_variant == CellVariant::OS_OS ? tech.params.coupling_wwl_os : tech.params.coupling_wwl;
  s.coupling_ratio_rwl = tech.params.coupling_rwl;
  s.c_sn = storage_cap(s.spec, tech);
  s.sense_threshold = tech.params.vref_ratio * cfg.vdd;
  s.gate_leak_per_um = tech.device(s.spec.read_device).gate_leak_per_um;
  return s;
}

struct DecayEvent {
  double time = 0;
  std::string label;
  double dv = 0;
};

struct DecayTrace {
  std::vector<double> times;
  std::vector<double> v_sn;
  std::vector<DecayEvent> events;
};

// ---------------------------------------------------------------------------
// Integrator

struct OdeOptions {
  double rtol = 1e-6;
  double atol = 1e-12;
  double h0 = 0;  ///< initial step, 0 picks one from the slope
  size_t max_steps = 1000000;
};

namespace detail {

struct DoPriStep {
  double y5, err;
};

// Dormand-Prince 5(4) step for a scalar ODE.
inline DoPriStep dopri_step(const std::function<double(double, double)>& f, double t, double y, double h) {
  double k1 = f(t, y);
  double k2 = f(t + h / 5, y + h * (k1 / 5));
  double k3 = f(t + 3 * h / 10, y + h * (3 * k1 / 40 + 9 * k2 / 40));
  double k4 = f(t + 4 * h / 5, y + h * (44 * k1 / 45 - 56 * k2 / 15 + 32 * k3 / 9));
  double k5 = f(t + 8 * h / 9,
                y + h * (19372 * k1 / 6561 - 25360 * k2 / 2187 + 64448 * k3 / 6561 - 212 * k4 / 729));
  double k6 = f(t + h, y + h * (9017 * k1 / 3168 - 355 * k2 / 33 + 46732 * k3 / 5247 + 49 * k4 / 176 -
                                5103 * k5 / 18656));
  double y5 = y + h * (35 * k1 / 384 + 500 * k3 / 1113 + 125 * k4 / 192 - 2187 * k5 / 6784 + 11 * k6 / 84);
  double k7 = f(t + h, y5);
  double y4 = y + h * (5179 * k1 / 57600 + 7571 * k3 / 16695 + 393 * k4 / 640 - 92097 * k5 / 339200 +
                       187 * k6 / 2100 + k7 / 40);
  return {y5, y5 - y4};
}

}  // namespace detail

/// Adaptive integration of y' = f(t, y) from t0 to t_end. `on_step` sees every
/// accepted point and may return false to stop early. Returns the last point.
inline std::pair<double, double> integrate_adaptive(const std::function<double(double, double)>& f, double t0,
                                                    double y0, double t_end,
                                                    const std::function<bool(double, double)>& on_step,
                                                    const OdeOptions& opt = {}) {
  double t = t0, y = y0;
  double h = opt.h0;
  if (!(h > 0)) {
    double slope = std::abs(f(t0, y0));
    h = slope > 0 ? 1e-3 * std::max(std::abs(y0), 1e-3) / slope : (t_end - t0);
    h = std::min(h, t_end - t0);
  }
  for (size_t n = 0; t < t_end && n < opt.max_steps; ++n) {
    h = std::min(h, t_end - t);
    auto s = detail::dopri_step(f, t, y, h);
    double tol = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(s.y5));
    double ratio = std::abs(s.err) / tol;
    if (ratio <= 1) {
      t = (t_end - t - h <= 1e-15 * t_end) ? t_end : t + h;
      y = s.y5;
      if (!on_step(t, y)) break;
    }
    double grow = ratio > 0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }
  return {t, y};
}

// ---------------------------------------------------------------------------
// Decay

/// Written level before the WWL falling edge.
inline double initial_level(const RetentionSetup& s) {
  return s.stored_state == StoredState::ONE ? written_one(s.config, s.spec, *s.tech) : 0.0;
}

/// dv/dt of the storage node at voltage v.
inline double sn_slope(const RetentionSetup& s, double v) {
  auto m = write_model(s.config, s.spec, *s.tech);
  double w = s.tech->params.gc_write_w;
  double lo = std::min(v, s.wbl_hold_level);
  double i_write = device_current(m, 0.0 - lo, std::abs(v - s.wbl_hold_level), w, s.config.temperature);
  double dir = v > s.wbl_hold_level ? -1.0 : 1.0;
  double i_gate = v > 0 ? s.gate_leak_per_um * s.tech->params.gc_read_w : 0.0;
  return (dir * i_write - i_gate) / s.c_sn;
}

/// Voltage after the WWL falling edge.
inline double after_wwl_coupling(const RetentionSetup& s) {
  return initial_level(s) - s.coupling_ratio_wwl * wwl_high(s.config);
}

inline DecayTrace simulate_decay(const RetentionSetup& s, double t_end, const OdeOptions& opt = {}) {
  s.validate();
  if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
  DecayTrace tr;
  double v0 = after_wwl_coupling(s);
  tr.events.push_back({0.0, "wwl_fall", v0 - initial_level(s)});
  tr.times.push_back(0.0);
  tr.v_sn.push_back(v0);
  integrate_adaptive([&](double, double v) { return sn_slope(s, v); }, 0.0, v0, t_end,
                     [&](double t, double v) {
                       tr.times.push_back(t);
                       tr.v_sn.push_back(v);
                       return true;
                     },
                     opt);
  return tr;
}

/// Appends the RWL coupling step of a read at the end of the trace.
inline DecayTrace apply_read_disturb(DecayTrace tr, const RetentionSetup& s) {
  if (tr.times.empty() || s.coupling_ratio_rwl == 0) return tr;
  double vdd = s.config.vdd;
  double v = tr.v_sn.back();
  double next = s.spec.rwl_polarity == RwlPolarity::ACTIVE_HIGH ? std::min(v + s.coupling_ratio_rwl * vdd, vdd)
                                                                 : v - s.coupling_ratio_rwl * vdd;
  double t = std::nextafter(tr.times.back(), std::numeric_limits<double>::infinity());
  tr.events.push_back({t, "rwl_read", next - v});
  tr.times.push_back(t);
  tr.v_sn.push_back(next);
  return tr;
}

// ---------------------------------------------------------------------------
// Retention time

struct RetentionResult {
  double seconds = 0;
  StoredState limiting = StoredState::ONE;
  double t_one = 0;
  double t_zero = 0;
};

inline constexpr double kRetentionHorizon = 1e12;  // s; beyond this a state counts as never failing

/// Time for one state, held against its worst-case bitline, to cross the sense threshold.
inline double state_retention(RetentionSetup s, StoredState state, const OdeOptions& opt = {}) {
  s.validate();
  s.stored_state = state;
  s.wbl_hold_level = state == StoredState::ONE ? 0.0 : s.config.vdd;
  auto failed = [&](double v) { return state == StoredState::ONE ? v < s.sense_threshold : v > s.sense_threshold; };
  double v0 = after_wwl_coupling(s);
  if (failed(v0)) return 0.0;
  auto f = [&](double, double v) { return sn_slope(s, v); };
  double t_prev = 0, v_prev = v0, t_hit = std::numeric_limits<double>::infinity();
  integrate_adaptive(f, 0.0, v0, kRetentionHorizon,
                     [&](double t, double v) {
                       if (!failed(v)) {
                         t_prev = t;
                         v_prev = v;
                         return true;
                       }
                       // bisect on the step length from the last readable point
                       double lo = 0, hi = t - t_prev;
                       for (int i = 0; i < 80 && hi - lo > 1e-12 * hi; ++i) {
                         double mid = 0.5 * (lo + hi);
                         (failed(detail::dopri_step(f, t_prev, v_prev, mid).y5) ? hi : lo) = mid;
                       }
                       t_hit = t_prev + hi;
                       return false;
                     },
                     opt);
  return t_hit;
}

/// Retention of the worst stored state.
inline RetentionResult retention_time(const RetentionSetup& s, const OdeOptions& opt = {}) {
  RetentionResult r;
  r.t_one = state_retention(s, StoredState::ONE, opt);
  r.t_zero = state_retention(s, StoredState::ZERO, opt);
  r.limiting = r.t_one <= r.t_zero ? StoredState::ONE : StoredState::ZERO;
  r.seconds = std::min(r.t_one, r.t_zero);
  return r;
}

/// Retention versus write-device threshold offset.
inline std::vector<std::pair<double, double>> retention_curve(const RetentionSetup& s,
                                                              const std::vector<double>& vt_values) {
  std::vector<std::pair<double, double>> out;
  for (double vt : vt_values) {
    auto c = s;
    c.config.write_vt_offset = vt;
    out.emplace_back(vt, retention_time(c).seconds);
  }
  return out;
}

/// OS_OS retention with the write threshold raised by 0.3 V.
inline double os_high_vt_check(const Technology& tech) {
  MemoryConfig cfg;
  cfg.cell_variant = CellVariant::OS_OS;
  cfg.write_vt_offset = 0.3;
  return retention_time(make_retention_setup(cfg, tech)).seconds;
}

// ---------------------------------------------------------------------------
// Export

inline std::string trace_to_text(const DecayTrace& tr) {
  std::ostringstream os;
  for (size_t i = 0; i < tr.times.size(); ++i) os << text::exact(tr.times[i]) << " " << text::exact(tr.v_sn[i]) << "\n";
  return os.str();
}

inline std::string trace_to_csv(const DecayTrace& tr) {
  std::ostringstream os;
  os << "time_s,v_sn_v\n";
  for (size_t i = 0; i < tr.times.size(); ++i) os << text::exact(tr.times[i]) << "," << text::exact(tr.v_sn[i]) << "\n";
  return os.str();
}

inline std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve) {
  std::ostringstream os;
  os << "vt_offset_v,retention_s\n";
  for (const auto& [vt, t] : curve) os << text::exact(vt) << "," << text::exact(t) << "\n";
  return os.str();
}

}  // namespace gcram
