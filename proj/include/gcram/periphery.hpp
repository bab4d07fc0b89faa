// SPDX-License-Identifier: Apache-2.0
//
// Parametrized CMOS gates and the periphery leaf cells.
// All periphery cells use the technology's periphery device models.

#pragma once

#include <string>

#include "gcram/cellgen.hpp"

namespace gcram {

enum class GateKind { INV, NAND2, NAND3, AND2 };

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::INV: return "inv";
    case GateKind::NAND2: return "nand2";
    case GateKind::NAND3: return "nand3";
    case GateKind::AND2: return "and2";
  }
  return "?";
}

inline int gate_inputs(GateKind k) { return k == GateKind::INV ? 1 : k == GateKind::NAND3 ? 3 : 2; }

/// Series NMOS widths scale with stack height so each gate drives like an inverter of width w.
inline double gate_nmos_w(GateKind k, double w) {
  switch (k) {
    case GateKind::NAND2: return 2 * w;
    case GateKind::NAND3: return 3 * w;
    default: return w;
  }
}

/// Capacitance seen at one input of the gate, farads.
inline double gate_input_cap(GateKind k, double w, const Technology& tech) {
  const auto& n = tech.device(tech.params.periphery_nmos);
  const auto& p = tech.device(tech.params.periphery_pmos);
  double gamma = tech.le.gamma;
  if (k == GateKind::AND2) return gate_input_cap(GateKind::NAND2, w, tech);
  return n.cgate_per_um * gate_nmos_w(k, w) + p.cgate_per_um * gamma * w;
}

inline std::string gate_name(GateKind k, double w) { return std::string(to_string(k)) + "_" + detail::wtag(w); }

inline std::vector<std::string> gate_input_names(GateKind k) {
  switch (gate_inputs(k)) {
    case 1: return {"a"};
    case 2: return {"a", "b"};
    default: return {"a", "b", "c"};
  }
}

/// Static CMOS gate of drive strength w (um of equivalent inverter NMOS).
/// Ports: inputs (a, b, c), y, vdd, gnd.
inline const GeneratedCell& gen_gate(CellLibrary& lib, GateKind kind, double w, const Technology& tech) {
  auto name = gate_name(kind, w);
  if (lib.contains(name)) return lib.at(name);
  const auto& nm = tech.params.periphery_nmos;
  const auto& pm = tech.params.periphery_pmos;
  double l = detail::min_l(tech, nm);
  double wp = tech.le.gamma * w;
  double wn = gate_nmos_w(kind, w);
  Subckt s;
  s.name = name;
  auto ins = gate_input_names(kind);
  s.ports = ins;
  s.ports.insert(s.ports.end(), {"y", "vdd", "gnd"});
  if (kind == GateKind::AND2) {
    const auto& nand = gen_gate(lib, GateKind::NAND2, w, tech);
    const auto& inv = gen_gate(lib, GateKind::INV, w, tech);
    s.inst("nand", nand.circuit.name, {"a", "b", "yb", "vdd", "gnd"});
    s.inst("inv", inv.circuit.name, {"yb", "y", "vdd", "gnd"});
    return lib.add(std::move(s), tech);
  }
  // pull-down stack from y to gnd, parallel pull-ups
  std::string upper = "y";
  for (size_t i = 0; i < ins.size(); ++i) {
    std::string lower = i + 1 == ins.size() ? "gnd" : "n" + std::to_string(i + 1);
    s.mos("n" + ins[i], upper, ins[i], lower, "gnd", nm, wn, l);
    upper = lower;
  }
  for (const auto& in : ins) s.mos("p" + in, "y", in, "vdd", "vdd", pm, wp, l);
  return lib.add(std::move(s), tech);
}

/// Constant-high source (PMOS with grounded gate). Ports: y, vdd, gnd.
inline const GeneratedCell& gen_tie_high(CellLibrary& lib, const Technology& tech) {
  if (lib.contains("tiehi")) return lib.at("tiehi");
  const auto& pm = tech.params.periphery_pmos;
  Subckt s;
  s.name = "tiehi";
  s.ports = {"y", "vdd", "gnd"};
  s.mos("p", "y", "gnd", "vdd", "vdd", pm, tech.le.unit_w, detail::min_l(tech, pm));
  return lib.add(std::move(s), tech);
}

namespace detail {

/// Adds a tri-state buffer out = in when en (en_b its complement) to s.
inline void tristate(Subckt& s, const std::string& tag, const std::string& in, const std::string& en,
                     const std::string& en_b, const std::string& out, double w, const Technology& tech) {
  const auto& nm = tech.params.periphery_nmos;
  const auto& pm = tech.params.periphery_pmos;
  double l = min_l(tech, nm);
  double wp = tech.le.gamma * w;
  std::string inb = in + "_b" + tag;
  s.mos("ni" + tag, inb, in, "gnd", "gnd", nm, tech.le.unit_w, l);
  s.mos("pi" + tag, inb, in, "vdd", "vdd", pm, tech.le.gamma * tech.le.unit_w, l);
  s.mos("pu" + tag, "xp" + tag, inb, "vdd", "vdd", pm, 2 * wp, l);
  s.mos("pe" + tag, out, en_b, "xp" + tag, "vdd", pm, 2 * wp, l);
  s.mos("ne" + tag, out, en, "xn" + tag, "gnd", nm, 2 * w, l);
  s.mos("nd" + tag, "xn" + tag, inb, "gnd", "gnd", nm, 2 * w, l);
}

inline void inverter(Subckt& s, const std::string& tag, const std::string& in, const std::string& out, double w,
                     const Technology& tech) {
  const auto& nm = tech.params.periphery_nmos;
  const auto& pm = tech.params.periphery_pmos;
  double l = min_l(tech, nm);
  s.mos("n" + tag, out, in, "gnd", "gnd", nm, w, l);
  s.mos("p" + tag, out, in, "vdd", "vdd", pm, tech.le.gamma * w, l);
}

inline constexpr double kDriverW = 1.2;  // write driver output NMOS, um
inline constexpr double kSenseW = 0.4;   // sense amplifier input pair, um
inline constexpr double kCondW = 0.4;    // conditioner device, um
inline constexpr double kMuxW = 0.4;     // column pass device, um

}  // namespace detail

/// Tri-state write driver. Single-ended ports: din, en, wbl, vdd, gnd.
/// Differential (SRAM) ports: din, en, bl, bl_b, vdd, gnd.
inline const GeneratedCell& gen_write_driver(CellLibrary& lib, const Technology& tech, bool differential = false) {
  std::string name = differential ? "write_driver_diff" : "write_driver";
  if (lib.contains(name)) return lib.at(name);
  Subckt s;
  s.name = name;
  detail::inverter(s, "en", "en", "en_b", tech.le.unit_w, tech);
  if (differential) {
    s.ports = {"din", "en", "bl", "bl_b", "vdd", "gnd"};
    detail::inverter(s, "din", "din", "din_n", tech.le.unit_w, tech);
    detail::tristate(s, "t", "din", "en", "en_b", "bl", detail::kDriverW, tech);
    detail::tristate(s, "c", "din_n", "en", "en_b", "bl_b", detail::kDriverW, tech);
  } else {
    s.ports = {"din", "en", "wbl", "vdd", "gnd"};
    detail::tristate(s, "t", "din", "en", "en_b", "wbl", detail::kDriverW, tech);
  }
  return lib.add(std::move(s), tech);
}

/// Latch-type comparator with precharged outputs, enabled by en.
/// Single-ended ports: rbl, vref, en, dout, vdd, gnd; differential: bl, bl_b, en, dout, vdd, gnd.
inline const GeneratedCell& gen_sense_amp(CellLibrary& lib, const Technology& tech, bool differential = false) {
  std::string name = differential ? "sense_amp_diff" : "sense_amp";
  if (lib.contains(name)) return lib.at(name);
  const auto& nm = tech.params.periphery_nmos;
  const auto& pm = tech.params.periphery_pmos;
  double l = detail::min_l(tech, nm);
  double w = detail::kSenseW;
  std::string in_p = differential ? "bl" : "rbl";
  std::string in_n = differential ? "bl_b" : "vref";
  Subckt s;
  s.name = name;
  s.ports = {in_p, in_n, "en", "dout", "vdd", "gnd"};
  s.mos("in_p", "o1", in_p, "tail", "gnd", nm, w, l);
  s.mos("in_n", "o2", in_n, "tail", "gnd", nm, w, l);
  s.mos("tail", "tail", "en", "gnd", "gnd", nm, 2 * w, l);
  s.mos("ld_1", "o1", "o2", "vdd", "vdd", pm, w, l);
  s.mos("ld_2", "o2", "o1", "vdd", "vdd", pm, w, l);
  s.mos("pre_1", "o1", "en", "vdd", "vdd", pm, w, l);
  s.mos("pre_2", "o2", "en", "vdd", "vdd", pm, w, l);
  detail::inverter(s, "out", "o1", "dout", tech.le.unit_w, tech);
  return lib.add(std::move(s), tech);
}

/// Bitline conditioner. PRECHARGE: PMOS to vdd on active-low en_b (ports bl, en_b, vdd).
/// PREDISCHARGE: NMOS to gnd on active-high en (ports bl, en, gnd).
/// Differential precharge conditions bl and bl_b.
inline const GeneratedCell& gen_bl_conditioner(CellLibrary& lib, Conditioning kind, const Technology& tech,
                                               bool differential = false) {
  std::string name = std::string(to_string(kind)) + (differential ? "_diff" : "");
  if (lib.contains(name)) return lib.at(name);
  Subckt s;
  s.name = name;
  double w = detail::kCondW;
  if (kind == Conditioning::PRECHARGE) {
    const auto& pm = tech.params.periphery_pmos;
    double l = detail::min_l(tech, pm);
    s.ports = {"bl", "en_b", "vdd"};
    s.mos("pre", "bl", "en_b", "vdd", "vdd", pm, tech.le.gamma * w, l);
    if (differential) {
      s.ports = {"bl", "bl_b", "en_b", "vdd"};
      s.mos("pre_b", "bl_b", "en_b", "vdd", "vdd", pm, tech.le.gamma * w, l);
    }
  } else {
    const auto& nm = tech.params.periphery_nmos;
    s.ports = {"bl", "en", "gnd"};
    s.mos("dis", "bl", "en", "gnd", "gnd", nm, w, detail::min_l(tech, nm));
  }
  return lib.add(std::move(s), tech);
}

/// One column of a pass-gate column multiplexer. Ports: bl, sel, out, gnd
/// (differential: bl, bl_b, sel, out, out_b, gnd).
inline const GeneratedCell& gen_column_mux(CellLibrary& lib, const Technology& tech, bool differential = false) {
  std::string name = differential ? "column_mux_diff" : "column_mux";
  if (lib.contains(name)) return lib.at(name);
  const auto& nm = tech.params.periphery_nmos;
  double l = detail::min_l(tech, nm);
  Subckt s;
  s.name = name;
  s.ports = {"bl", "sel", "out", "gnd"};
  s.mos("pass", "out", "sel", "bl", "gnd", nm, detail::kMuxW, l);
  if (differential) {
    s.ports = {"bl", "bl_b", "sel", "out", "out_b", "gnd"};
    s.mos("pass_b", "out_b", "sel", "bl_b", "gnd", nm, detail::kMuxW, l);
  }
  return lib.add(std::move(s), tech);
}

/// Cross-coupled level shifter from the vdd domain to vwwl. Ports: in, out, vdd, vwwl, gnd.
inline const GeneratedCell& gen_level_shifter(CellLibrary& lib, const Technology& tech) {
  if (lib.contains("level_shifter")) return lib.at("level_shifter");
  const auto& nm = tech.params.periphery_nmos;
  const auto& pm = tech.params.periphery_pmos;
  double l = detail::min_l(tech, nm);
  double w = 2 * tech.le.unit_w;
  Subckt s;
  s.name = "level_shifter";
  s.ports = {"in", "out", "vdd", "vwwl", "gnd"};
  detail::inverter(s, "in", "in", "in_b", tech.le.unit_w, tech);
  s.mos("pd_x", "x", "in", "gnd", "gnd", nm, w, l);
  s.mos("pd_out", "out", "in_b", "gnd", "gnd", nm, w, l);
  s.mos("pu_x", "x", "out", "vwwl", "vwwl", pm, tech.le.unit_w, l);
  s.mos("pu_out", "out", "x", "vwwl", "vwwl", pm, tech.le.unit_w, l);
  return lib.add(std::move(s), tech);
}

/// Transmission-gate master-slave flip-flop, rising-edge. Ports: d, clk, q, vdd, gnd.
inline const GeneratedCell& gen_dff(CellLibrary& lib, const Technology& tech) {
  if (lib.contains("dff")) return lib.at("dff");
  const auto& inv = gen_gate(lib, GateKind::INV, tech.le.unit_w, tech);
  const auto& nm = tech.params.periphery_nmos;
  const auto& pm = tech.params.periphery_pmos;
  double l = detail::min_l(tech, nm);
  double w = tech.le.unit_w;
  Subckt s;
  s.name = "dff";
  s.ports = {"d", "clk", "q", "vdd", "gnd"};
  const auto& iv = inv.circuit.name;
  s.inst("clk_inv", iv, {"clk", "clk_b", "vdd", "gnd"});
  auto tgate = [&](const std::string& tag, const std::string& a, const std::string& b, const std::string& on,
                   const std::string& on_b) {
    s.mos("tn_" + tag, b, on, a, "gnd", nm, w, l);
    s.mos("tp_" + tag, b, on_b, a, "vdd", pm, w, l);
  };
  // master transparent while clk is low
  tgate("m_in", "d", "m", "clk_b", "clk");
  s.inst("m_inv", iv, {"m", "m_b", "vdd", "gnd"});
  s.inst("m_fb", iv, {"m_b", "m_f", "vdd", "gnd"});
  tgate("m_hold", "m_f", "m", "clk", "clk_b");
  // slave transparent while clk is high
  tgate("s_in", "m_b", "s", "clk", "clk_b");
  s.inst("s_inv", iv, {"s", "q", "vdd", "gnd"});
  s.inst("s_fb", iv, {"q", "s_f", "vdd", "gnd"});
  tgate("s_hold", "s_f", "s", "clk_b", "clk");
  return lib.add(std::move(s), tech);
}

/// Clock input capacitance of gen_dff, farads.
inline double dff_clock_cap(const Technology& tech) {
  const auto& n = tech.device(tech.params.periphery_nmos);
  const auto& p = tech.device(tech.params.periphery_pmos);
  double w = tech.le.unit_w;
  // clock inverter plus two NMOS and two PMOS transmission-gate gates
  return gate_input_cap(GateKind::INV, w, tech) + 2 * (n.cgate_per_um + p.cgate_per_um) * w;
}

/// Resistive divider producing vref = vref_ratio * vdd. Ports: vref, vdd, gnd.
inline const GeneratedCell& gen_vref_stub(CellLibrary& lib, const Technology& tech) {
  if (lib.contains("vref_stub")) return lib.at("vref_stub");
  double total = tech.params.vref_divider_ohms;
  double ratio = tech.params.vref_ratio;
  Subckt s;
  s.name = "vref_stub";
  s.ports = {"vref", "vdd", "gnd"};
  s.passive(DeviceKind::RES, "top", "vdd", "vref", total * (1 - ratio));
  s.passive(DeviceKind::RES, "bot", "vref", "gnd", total * ratio);
  return lib.add(std::move(s), tech);
}

}  // namespace gcram
