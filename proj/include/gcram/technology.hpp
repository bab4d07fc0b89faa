// SPDX-License-Identifier: Apache-2.0
//
// Technology description: layers, design rules, device and wire models,
// logical-effort constants and the calibration parameters the generators use.
//
// File grammar: top-level `name` and `dbu_per_um` keys, then records opened by
// a section header (`[layer]`, `[rule]`, `[device]`, `[wire]`,
// `[logical_effort]`, `[params]`). Each header starts a new record; the
// following `key = value` lines fill it in. `#` starts a comment.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gcram/text.hpp"

namespace gcram {

enum class LayerPurpose { DIFF, POLY, METAL, VIA, WELL, OS_CHANNEL, MARKER };
enum class RuleKind { MIN_WIDTH, MIN_SPACING, MIN_AREA, ENCLOSURE, EXTENSION };
enum class Channel { NMOS_SI, PMOS_SI, NMOS_OS };

/// GDS (layer, datatype) pair.
struct GdsLayer {
  int16_t layer = 0;
  int16_t datatype = 0;
  auto operator<=>(const GdsLayer&) const = default;
};

struct Layer {
  std::string name;
  GdsLayer gds;
  LayerPurpose purpose = LayerPurpose::METAL;
  bool operator==(const Layer&) const = default;
};

struct DesignRule {
  RuleKind kind = RuleKind::MIN_WIDTH;
  std::string layer_a;
  std::string layer_b;  ///< ENCLOSURE: layer_a encloses layer_b; EXTENSION: layer_a extends past layer_b
  double value = 0;     ///< um, or um^2 for MIN_AREA
  bool operator==(const DesignRule&) const = default;
};

struct TransistorModel {
  std::string name;
  Channel channel = Channel::NMOS_SI;
  double vt0 = 0.4;
  double ss = 0.09;           ///< V/decade at 300 K
  double ioff_per_um = 1e-10;
  double ion_per_um = 6e-4;
  double cgate_per_um = 1e-15;
  double cdrain_per_um = 0.5e-15;
  double n_factor = 1.3;
  double min_w = 0.09;
  double min_l = 0.05;
  double vdd_ref = 1.1;            ///< supply at which ion_per_um is specified
  double gate_leak_per_um = 0.0;   ///< gate dielectric leakage, A/um

  bool is_pmos() const { return channel == Channel::PMOS_SI; }
  bool operator==(const TransistorModel&) const = default;
};

struct WireModel {
  std::string layer;
  double r_per_sq = 0.1;
  double c_per_um = 0.2e-15;
  double default_width = 0.07;
  double resistance(double length_um, double width_um = 0) const {
    return r_per_sq * length_um / (width_um > 0 ? width_um : default_width);
  }
  bool operator==(const WireModel&) const = default;
};

struct LogicalEffortConstants {
  double tau = 5e-12;
  double p_inv = 1.0;
  double gamma = 2.0;
  double unit_w = 0.2;  ///< NMOS width of the unit inverter, um
  bool operator==(const LogicalEffortConstants&) const = default;
};

/// Calibration values used by the generators and models. All are overridable from the tech file.
struct TechParams {
  double vref_ratio = 0.5;
  double dv_sense = 0.1;
  double c_sn_wire = 0.5e-15;
  double coupling_wwl = 0.05;
  double coupling_wwl_os = 0.02;
  double coupling_rwl = 0.03;
  double delay_margin = 1.5;
  double dff_delay_tau = 4.0;
  double sa_delay_tau = 6.0;
  double chain_fanout = 4.0;
  double vref_divider_ohms = 100e3;
  double gc_write_w = 0.3;
  double gc_read_w = 0.55;
  double sram_pd_w = 0.16;
  double sram_pg_w = 0.12;
  double sram_pu_w = 0.09;
  double wl_wire_width = 0.1;
  double bl_wire_width = 0.1;
  int channel_max_tracks = 256;
  std::string cell_nmos = "nmos";
  std::string cell_pmos = "pmos";
  std::string os_nmos = "nmos_os";
  std::string periphery_nmos = "nmos_hvt";
  std::string periphery_pmos = "pmos";
  std::string footprint_layers = "active poly nwell contact metal1";
  bool operator==(const TechParams&) const = default;
};

struct Technology {
  std::string name;
  int dbu_per_um = 1000;
  std::vector<Layer> layers;
  std::vector<DesignRule> rules;
  std::map<std::string, TransistorModel> devices;
  std::map<std::string, WireModel> wires;
  LogicalEffortConstants le;
  TechParams params;

  const Layer* find_layer(std::string_view n) const {
    for (const auto& l : layers)
      if (l.name == n) return &l;
    return nullptr;
  }
  const Layer& layer(std::string_view n) const {
    if (auto* l = find_layer(n)) return *l;
    throw std::out_of_range("technology '" + name + "' has no layer '" + std::string(n) + "'");
  }
  const Layer* find_layer(GdsLayer key) const {
    for (const auto& l : layers)
      if (l.gds == key) return &l;
    return nullptr;
  }
  const TransistorModel& device(std::string_view n) const {
    auto it = devices.find(std::string(n));
    if (it == devices.end())
      throw std::out_of_range("technology '" + name + "' has no device model '" + std::string(n) + "'");
    return it->second;
  }
  const WireModel& wire(std::string_view layer_name) const {
    auto it = wires.find(std::string(layer_name));
    if (it == wires.end())
      throw std::out_of_range("technology '" + name + "' has no wire model for '" + std::string(layer_name) + "'");
    return it->second;
  }
  int32_t to_dbu(double um) const { return static_cast<int32_t>(std::llround(um * dbu_per_um)); }
  double to_um(long long dbu) const { return static_cast<double>(dbu) / dbu_per_um; }

  /// Input capacitance of the unit inverter (NMOS unit_w, PMOS gamma*unit_w).
  double unit_inverter_cap() const {
    return device(params.periphery_nmos).cgate_per_um * le.unit_w +
           device(params.periphery_pmos).cgate_per_um * le.unit_w * le.gamma;
  }

  bool operator==(const Technology&) const = default;
};

// ---------------------------------------------------------------------------
// Enum text forms

inline std::string_view to_string(LayerPurpose p) {
  switch (p) {
    case LayerPurpose::DIFF: return "diff";
    case LayerPurpose::POLY: return "poly";
    case LayerPurpose::METAL: return "metal";
    case LayerPurpose::VIA: return "via";
    case LayerPurpose::WELL: return "well";
    case LayerPurpose::OS_CHANNEL: return "os_channel";
    case LayerPurpose::MARKER: return "marker";
  }
  return "?";
}

inline std::string_view to_string(RuleKind k) {
  switch (k) {
    case RuleKind::MIN_WIDTH: return "min_width";
    case RuleKind::MIN_SPACING: return "min_spacing";
    case RuleKind::MIN_AREA: return "min_area";
    case RuleKind::ENCLOSURE: return "enclosure";
    case RuleKind::EXTENSION: return "extension";
  }
  return "?";
}

inline std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::NMOS_SI: return "nmos_si";
    case Channel::PMOS_SI: return "pmos_si";
    case Channel::NMOS_OS: return "nmos_os";
  }
  return "?";
}

namespace detail {

template <typename E, size_t N>
std::optional<E> enum_from(std::string_view s, const E (&all)[N]) {
  auto l = text::lower(s);
  for (E e : all)
    if (to_string(e) == l) return e;
  return std::nullopt;
}

inline constexpr LayerPurpose kPurposes[] = {LayerPurpose::DIFF, LayerPurpose::POLY, LayerPurpose::METAL,
                                             LayerPurpose::VIA, LayerPurpose::WELL, LayerPurpose::OS_CHANNEL,
                                             LayerPurpose::MARKER};
inline constexpr RuleKind kRuleKinds[] = {RuleKind::MIN_WIDTH, RuleKind::MIN_SPACING, RuleKind::MIN_AREA,
                                          RuleKind::ENCLOSURE, RuleKind::EXTENSION};
inline constexpr Channel kChannels[] = {Channel::NMOS_SI, Channel::PMOS_SI, Channel::NMOS_OS};

}  // namespace detail

// ---------------------------------------------------------------------------
// Loading

inline void validate(const Technology& tech) {
  if (tech.dbu_per_um < 100) throw ParseError(0, "dbu_per_um must be >= 100");
  std::set<std::string> names;
  std::set<GdsLayer> keys;
  for (const auto& l : tech.layers) {
    if (!names.insert(l.name).second) throw ParseError(0, "duplicate layer '" + l.name + "'");
    if (!keys.insert(l.gds).second) throw ParseError(0, "duplicate gds pair on layer '" + l.name + "'");
  }
  for (const auto& [n, m] : tech.devices) {
    bool os = m.channel == Channel::NMOS_OS;
    if (!(m.ss > 0) || (!os && (m.ss < 0.06 || m.ss > 0.2)) || (os && m.ss > 0.3))
      throw ParseError(0, "device '" + n + "': subthreshold slope out of range");
    if (!(m.ioff_per_um > 0)) throw ParseError(0, "device '" + n + "': ioff_per_um must be > 0");
    if (!(m.ion_per_um > m.ioff_per_um)) throw ParseError(0, "device '" + n + "': ion_per_um must exceed ioff_per_um");
    if (!(m.cgate_per_um >= 0) || !(m.min_w > 0) || !(m.min_l > 0) || !(m.vdd_ref > 0))
      throw ParseError(0, "device '" + n + "': invalid geometry or capacitance");
  }
  for (const auto& [n, w] : tech.wires) {
    if (!tech.find_layer(n)) throw ParseError(0, "wire model references undefined layer '" + n + "'");
    if (!(w.r_per_sq > 0) || !(w.c_per_um > 0) || !(w.default_width > 0))
      throw ParseError(0, "wire model '" + n + "': values must be positive");
  }
  if (!(tech.le.tau > 0) || !(tech.le.p_inv >= 0) || tech.le.gamma < 1 || tech.le.gamma > 3 || !(tech.le.unit_w > 0))
    throw ParseError(0, "logical_effort constants out of range");
}

inline Technology load_tech(std::string_view input) {
  Technology tech;
  enum class Section { TOP, LAYER, RULE, DEVICE, WIRE, LE, PARAMS } section = Section::TOP;
  std::vector<std::pair<int, TransistorModel>> device_records;
  std::vector<std::pair<int, WireModel>> wire_records;
  std::vector<int> layer_lines, rule_lines;
  int lineno = 0;

  for (auto raw : text::split_lines(input)) {
    ++lineno;
    auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "malformed section header");
      auto s = text::trim(line.substr(1, line.size() - 2));
      if (s == "layer") {
        section = Section::LAYER;
        tech.layers.emplace_back();
        layer_lines.push_back(lineno);
      } else if (s == "rule") {
        section = Section::RULE;
        tech.rules.emplace_back();
        rule_lines.push_back(lineno);
      } else if (s == "device") {
        section = Section::DEVICE;
        device_records.emplace_back(lineno, TransistorModel{});
      } else if (s == "wire") {
        section = Section::WIRE;
        wire_records.emplace_back(lineno, WireModel{});
      } else if (s == "logical_effort") {
        section = Section::LE;
      } else if (s == "params") {
        section = Section::PARAMS;
      } else {
        throw ParseError(lineno, "unknown section '" + std::string(s) + "'");
      }
      continue;
    }
    auto kv = text::key_value(line);
    if (!kv) throw ParseError(lineno, "expected 'key = value'");
    std::string key(kv->key);
    auto val = kv->value;
    auto num = [&]() {
      auto v = text::to_double(val);
      if (!v) throw ParseError(lineno, "malformed number for '" + key + "'");
      return *v;
    };
    auto integer = [&]() {
      auto v = text::to_int(val);
      if (!v) throw ParseError(lineno, "malformed integer for '" + key + "'");
      return *v;
    };
    auto unknown = [&]() { throw ParseError(lineno, "unknown key '" + key + "'"); };

    switch (section) {
      case Section::TOP:
        if (key == "name") tech.name = std::string(val);
        else if (key == "dbu_per_um") tech.dbu_per_um = static_cast<int>(integer());
        else unknown();
        break;
      case Section::LAYER: {
        auto& l = tech.layers.back();
        if (key == "name") {
          l.name = std::string(val);
        } else if (key == "gds") {
          auto parts = text::split_ws(val);
          if (parts.size() != 2) throw ParseError(lineno, "gds expects '<layer> <datatype>'");
          auto a = text::to_int(parts[0]);
          auto b = text::to_int(parts[1]);
          if (!a || !b || *a < 0 || *a > 255 || *b < 0 || *b > 255)
            throw ParseError(lineno, "gds layer/datatype must be integers in 0..255");
          l.gds = {static_cast<int16_t>(*a), static_cast<int16_t>(*b)};
        } else if (key == "purpose") {
          auto p = detail::enum_from(val, detail::kPurposes);
          if (!p) throw ParseError(lineno, "unknown layer purpose '" + std::string(val) + "'");
          l.purpose = *p;
        } else {
          unknown();
        }
        break;
      }
      case Section::RULE: {
        auto& r = tech.rules.back();
        if (key == "kind") {
          auto k = detail::enum_from(val, detail::kRuleKinds);
          if (!k) throw ParseError(lineno, "unknown rule kind '" + std::string(val) + "'");
          r.kind = *k;
        } else if (key == "layer") {
          r.layer_a = std::string(val);
          rule_lines.back() = lineno;
        } else if (key == "layer_b") {
          r.layer_b = std::string(val);
        } else if (key == "value") {
          r.value = num();
          if (!(r.value > 0)) throw ParseError(lineno, "rule value must be > 0");
        } else {
          unknown();
        }
        break;
      }
      case Section::DEVICE: {
        auto& m = device_records.back().second;
        if (key == "name") m.name = std::string(val);
        else if (key == "channel") {
          auto c = detail::enum_from(val, detail::kChannels);
          if (!c) throw ParseError(lineno, "unknown channel '" + std::string(val) + "'");
          m.channel = *c;
        } else if (key == "vt0") m.vt0 = num();
        else if (key == "ss") m.ss = num();
        else if (key == "ioff_per_um") m.ioff_per_um = num();
        else if (key == "ion_per_um") m.ion_per_um = num();
        else if (key == "cgate_per_um") m.cgate_per_um = num();
        else if (key == "cdrain_per_um") m.cdrain_per_um = num();
        else if (key == "n_factor") m.n_factor = num();
        else if (key == "min_w") m.min_w = num();
        else if (key == "min_l") m.min_l = num();
        else if (key == "vdd_ref") m.vdd_ref = num();
        else if (key == "gate_leak_per_um") m.gate_leak_per_um = num();
        else unknown();
        break;
      }
      case Section::WIRE: {
        auto& w = wire_records.back().second;
        if (key == "layer") w.layer = std::string(val);
        else if (key == "r_per_sq") w.r_per_sq = num();
        else if (key == "c_per_um") w.c_per_um = num();
        else if (key == "default_width") w.default_width = num();
        else unknown();
        break;
      }
      case Section::LE:
        if (key == "tau") tech.le.tau = num();
        else if (key == "p_inv") tech.le.p_inv = num();
        else if (key == "gamma") tech.le.gamma = num();
        else if (key == "unit_w") tech.le.unit_w = num();
        else unknown();
        break;
      case Section::PARAMS: {
        auto& p = tech.params;
        std::string sval(val);
        if (key == "vref_ratio") p.vref_ratio = num();
        else if (key == "dv_sense") p.dv_sense = num();
        else if (key == "c_sn_wire") p.c_sn_wire = num();
        else if (key == "coupling_wwl") p.coupling_wwl = num();
        else if (key == "coupling_wwl_os") p.coupling_wwl_os = num();
        else if (key == "coupling_rwl") p.coupling_rwl = num();
        else if (key == "delay_margin") p.delay_margin = num();
        else if (key == "dff_delay_tau") p.dff_delay_tau = num();
        else if (key == "sa_delay_tau") p.sa_delay_tau = num();
        else if (key == "chain_fanout") p.chain_fanout = num();
        else if (key == "vref_divider_ohms") p.vref_divider_ohms = num();
        else if (key == "gc_write_w") p.gc_write_w = num();
        else if (key == "gc_read_w") p.gc_read_w = num();
        else if (key == "sram_pd_w") p.sram_pd_w = num();
        else if (key == "sram_pg_w") p.sram_pg_w = num();
        else if (key == "sram_pu_w") p.sram_pu_w = num();
        else if (key == "wl_wire_width") p.wl_wire_width = num();
        else if (key == "bl_wire_width") p.bl_wire_width = num();
        else if (key == "channel_max_tracks") p.channel_max_tracks = static_cast<int>(integer());
        else if (key == "cell_nmos") p.cell_nmos = sval;
        else if (key == "cell_pmos") p.cell_pmos = sval;
        else if (key == "os_nmos") p.os_nmos = sval;
        else if (key == "periphery_nmos") p.periphery_nmos = sval;
        else if (key == "periphery_pmos") p.periphery_pmos = sval;
        else if (key == "footprint_layers") p.footprint_layers = sval;
        else unknown();
        break;
      }
    }
  }

  for (size_t i = 0; i < tech.layers.size(); ++i)
    if (tech.layers[i].name.empty()) throw ParseError(layer_lines[i], "layer without a name");
  for (auto& [line, m] : device_records) {
    if (m.name.empty()) throw ParseError(line, "device without a name");
    if (tech.devices.count(m.name)) throw ParseError(line, "duplicate device model '" + m.name + "'");
    tech.devices.emplace(m.name, m);
  }
  for (auto& [line, w] : wire_records) {
    if (!tech.find_layer(w.layer)) throw ParseError(line, "wire references undefined layer '" + w.layer + "'");
    if (tech.wires.count(w.layer)) throw ParseError(line, "duplicate wire model for '" + w.layer + "'");
    tech.wires.emplace(w.layer, w);
  }
  for (size_t i = 0; i < tech.rules.size(); ++i) {
    const auto& r = tech.rules[i];
    if (!tech.find_layer(r.layer_a))
      throw ParseError(rule_lines[i], "rule references undefined layer '" + r.layer_a + "'");
    bool pair = r.kind == RuleKind::ENCLOSURE || r.kind == RuleKind::EXTENSION;
    if (pair && !tech.find_layer(r.layer_b))
      throw ParseError(rule_lines[i], "rule references undefined layer '" + r.layer_b + "'");
    if (!(r.value > 0)) throw ParseError(rule_lines[i], "rule value must be > 0");
  }
  validate(tech);
  return tech;
}

inline std::string to_text(const Technology& tech) {
  std::ostringstream os;
  auto x = [](double v) { return text::exact(v); };
  os << "name = " << tech.name << "\n";
  os << "dbu_per_um = " << tech.dbu_per_um << "\n";
  for (const auto& l : tech.layers) {
    os << "\n[layer]\nname = " << l.name << "\ngds = " << l.gds.layer << " " << l.gds.datatype
       << "\npurpose = " << to_string(l.purpose) << "\n";
  }
  for (const auto& r : tech.rules) {
    os << "\n[rule]\nkind = " << to_string(r.kind) << "\nlayer = " << r.layer_a << "\n";
    if (!r.layer_b.empty()) os << "layer_b = " << r.layer_b << "\n";
    os << "value = " << x(r.value) << "\n";
  }
  for (const auto& [n, m] : tech.devices) {
    os << "\n[device]\nname = " << n << "\nchannel = " << to_string(m.channel) << "\nvt0 = " << x(m.vt0)
       << "\nss = " << x(m.ss) << "\nioff_per_um = " << x(m.ioff_per_um) << "\nion_per_um = " << x(m.ion_per_um)
       << "\ncgate_per_um = " << x(m.cgate_per_um) << "\ncdrain_per_um = " << x(m.cdrain_per_um)
       << "\nn_factor = " << x(m.n_factor) << "\nmin_w = " << x(m.min_w) << "\nmin_l = " << x(m.min_l)
       << "\nvdd_ref = " << x(m.vdd_ref) << "\ngate_leak_per_um = " << x(m.gate_leak_per_um) << "\n";
  }
  for (const auto& [n, w] : tech.wires) {
    os << "\n[wire]\nlayer = " << n << "\nr_per_sq = " << x(w.r_per_sq) << "\nc_per_um = " << x(w.c_per_um)
       << "\ndefault_width = " << x(w.default_width) << "\n";
  }
  os << "\n[logical_effort]\ntau = " << x(tech.le.tau) << "\np_inv = " << x(tech.le.p_inv)
     << "\ngamma = " << x(tech.le.gamma) << "\nunit_w = " << x(tech.le.unit_w) << "\n";
  const auto& p = tech.params;
  os << "\n[params]\nvref_ratio = " << x(p.vref_ratio) << "\ndv_sense = " << x(p.dv_sense)
     << "\nc_sn_wire = " << x(p.c_sn_wire) << "\ncoupling_wwl = " << x(p.coupling_wwl)
     << "\ncoupling_wwl_os = " << x(p.coupling_wwl_os) << "\ncoupling_rwl = " << x(p.coupling_rwl)
     << "\ndelay_margin = " << x(p.delay_margin) << "\ndff_delay_tau = " << x(p.dff_delay_tau)
     << "\nsa_delay_tau = " << x(p.sa_delay_tau) << "\nchain_fanout = " << x(p.chain_fanout)
     << "\nvref_divider_ohms = " << x(p.vref_divider_ohms) << "\ngc_write_w = " << x(p.gc_write_w)
     << "\ngc_read_w = " << x(p.gc_read_w) << "\nsram_pd_w = " << x(p.sram_pd_w)
     << "\nsram_pg_w = " << x(p.sram_pg_w) << "\nsram_pu_w = " << x(p.sram_pu_w)
     << "\nwl_wire_width = " << x(p.wl_wire_width) << "\nbl_wire_width = " << x(p.bl_wire_width)
     << "\nchannel_max_tracks = " << p.channel_max_tracks << "\ncell_nmos = " << p.cell_nmos
     << "\ncell_pmos = " << p.cell_pmos << "\nos_nmos = " << p.os_nmos
     << "\nperiphery_nmos = " << p.periphery_nmos << "\nperiphery_pmos = " << p.periphery_pmos
     << "\nfootprint_layers = " << p.footprint_layers << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Device current

inline constexpr double kBoltzmannOverQ = 8.617333262e-5;  // V/K

inline double thermal_voltage(double kelvin) { return kBoltzmannOverQ * kelvin; }

/// Drain current magnitude in amps.
///
/// Below threshold the current is ioff_per_um * w * 10^(vgs/ss_T) * (1 - exp(-vds/vT))
/// with ss_T = ss * T/300. Above threshold the vgs-dependent part is interpolated in
/// (vgs - vt0)^2 from the threshold current up to ion_per_um * w at vgs = vdd_ref,
/// with the same drain factor, so the curve is continuous at vt0.
///
/// PMOS devices take source-referenced magnitudes: pass vsg as `vgs` and vsd as `vds`.
/// Negative vds is treated as zero bias.
inline double device_current(const TransistorModel& m, double vgs, double vds, double w, double kelvin = 300.0) {
  if (vds <= 0) return 0.0;
  double ss_t = m.ss * (kelvin / 300.0);
  double drain = 1.0 - std::exp(-vds / thermal_voltage(kelvin));
  double scale = m.ioff_per_um * w;
  if (vgs < m.vt0) return scale * std::pow(10.0, vgs / ss_t) * drain;
  double i_th = scale * std::pow(10.0, m.vt0 / ss_t);
  double i_on = m.ion_per_um * w;
  double span = m.vdd_ref - m.vt0;
  double x = span > 0 ? (vgs - m.vt0) / span : 1.0;
  return (i_th + (i_on - i_th) * x * x) * drain;
}

/// Threshold shift that keeps the subthreshold curve shape: vt0 moves by `delta`
/// and the zero-bias off current drops by 10^(delta/ss).
inline TransistorModel shift_vt(TransistorModel m, double delta) {
  m.vt0 += delta;
  m.ioff_per_um *= std::pow(10.0, -delta / m.ss);
  return m;
}

/// Reads and parses a technology file.
inline Technology load_tech_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open technology file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_tech(text);
}

}  // namespace gcram
