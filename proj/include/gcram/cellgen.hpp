// SPDX-License-Identifier: Apache-2.0
//
// Leaf cell generators: bitcells, logic gates and the periphery cells of a bank.
// Each generator registers a circuit and its layout in a CellLibrary under a
// name derived from its parameters and returns the registered entry; asking
// twice for the same cell returns the existing one.

#pragma once

#include <cmath>
#include <map>
#include <string>

#include "gcram/config.hpp"
#include "gcram/netlist.hpp"
#include "gcram/technology.hpp"
#include "gcram/tile.hpp"

namespace gcram {

enum class RwlPolarity { ACTIVE_LOW, ACTIVE_HIGH };
enum class Conditioning { PREDISCHARGE, PRECHARGE };

inline std::string_view to_string(RwlPolarity p) { return p == RwlPolarity::ACTIVE_LOW ? "active_low" : "active_high"; }
inline std::string_view to_string(Conditioning c) { return c == Conditioning::PRECHARGE ? "precharge" : "predischarge"; }

struct CellVariantSpec {
  CellVariant variant = CellVariant::SI_SI_NN;
  std::string write_device;
  std::string read_device;
  RwlPolarity rwl_polarity = RwlPolarity::ACTIVE_LOW;
  Conditioning read_bl_conditioning = Conditioning::PREDISCHARGE;
  bool differential = false;
};

inline CellVariantSpec variant_spec(CellVariant v, const Technology& tech) {
  const auto& p = tech.params;
  CellVariantSpec s;
  s.variant = v;
  switch (v) {
    case CellVariant::SI_SI_NN:
      s.write_device = s.read_device = p.cell_nmos;
      break;
    case CellVariant::SI_SI_NP:
      s.write_device = p.cell_nmos;
      s.read_device = p.cell_pmos;
      s.rwl_polarity = RwlPolarity::ACTIVE_HIGH;
      break;
    case CellVariant::OS_OS:
      s.write_device = s.read_device = p.os_nmos;
      s.read_bl_conditioning = Conditioning::PRECHARGE;
      break;
    case CellVariant::SRAM_6T:
      s.write_device = s.read_device = p.cell_nmos;
      s.read_bl_conditioning = Conditioning::PRECHARGE;
      s.differential = true;
      break;
  }
  tech.device(s.write_device);
  tech.device(s.read_device);
  return s;
}

struct GeneratedCell {
  Subckt circuit;
  LayoutCell layout;
};

struct CellLibrary {
  std::map<std::string, GeneratedCell> cells;

  bool contains(const std::string& name) const { return cells.count(name) > 0; }
  const GeneratedCell& at(const std::string& name) const {
    auto it = cells.find(name);
    if (it == cells.end()) throw std::out_of_range("cell '" + name + "' not generated");
    return it->second;
  }
  CircuitLibrary circuits() const {
    CircuitLibrary out;
    for (const auto& [n, c] : cells) out.emplace(n, c.circuit);
    return out;
  }
  LayoutLibrary layouts() const {
    LayoutLibrary out;
    for (const auto& [n, c] : cells) out.emplace(n, c.layout);
    return out;
  }
  /// Registers a circuit; its layout is built from the flattened devices.
  const GeneratedCell& add(Subckt circuit, const Technology& tech, const LeafStyle& style = {}) {
    auto name = circuit.name;
    if (auto it = cells.find(name); it != cells.end()) return it->second;
    LayoutCell layout;
    if (circuit.instances.empty()) {
      layout = build_leaf_layout(circuit, tech, style);
    } else {
      CircuitLibrary lib;
      for (const auto& [n, c] : cells) lib.emplace(n, c.circuit);
      auto flat = flatten(circuit, lib);
      flat.name = name;
      flat.ports = circuit.ports;
      layout = build_leaf_layout(flat, tech, style);
    }
    return cells.emplace(name, GeneratedCell{std::move(circuit), std::move(layout)}).first->second;
  }
};

namespace detail {

/// Width tag for cell names: 0.4 um -> "400" (in nm).
inline std::string wtag(double w_um) { return std::to_string(static_cast<long long>(std::llround(w_um * 1000))); }

inline double min_l(const Technology& tech, const std::string& model) { return tech.device(model).min_l; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Bitcells

inline std::string bitcell_name(CellVariant v) { return "bitcell_" + std::string(to_string(v)); }

/// Two-transistor gain cell. Write device: g=wwl d=sn s=wbl. Read device: g=sn d=rbl s=rwl.
inline const GeneratedCell& gen_gain_cell(CellLibrary& lib, const CellVariantSpec& spec, const Technology& tech) {
  if (spec.variant == CellVariant::SRAM_6T) throw std::invalid_argument("gen_gain_cell: sram_6t is not a gain cell");
  Subckt s;
  s.name = bitcell_name(spec.variant);
  s.ports = {"wwl", "wbl", "rwl", "rbl", "gnd"};
  const auto& wm = tech.device(spec.write_device);
  const auto& rm = tech.device(spec.read_device);
  s.mos("write", "sn", "wwl", "wbl", "gnd", spec.write_device, tech.params.gc_write_w, wm.min_l);
  // a p-type read device has its body on rwl, the most positive terminal of its source side
  std::string read_bulk = rm.is_pmos() ? "rwl" : "gnd";
  s.mos("read", "rbl", "sn", "rwl", read_bulk, spec.read_device, tech.params.gc_read_w, rm.min_l);
  bool oxide = wm.channel == Channel::NMOS_OS && rm.channel == Channel::NMOS_OS;
  LeafStyle style;
  style.rails = true;
  if (oxide) {
    style.rail_layer = "metal2";
    style.landing_pad = true;
  }
  return lib.add(std::move(s), tech, style);
}

/// Six-transistor SRAM reference cell: q/qb cross-coupled inverters, pass gates on wl.
inline const GeneratedCell& gen_sram6t(CellLibrary& lib, const Technology& tech) {
  const auto& p = tech.params;
  Subckt s;
  s.name = bitcell_name(CellVariant::SRAM_6T);
  s.ports = {"wl", "bl", "bl_b", "vdd", "gnd"};
  double l = detail::min_l(tech, p.cell_nmos);
  s.mos("pd_q", "q", "qb", "gnd", "gnd", p.cell_nmos, p.sram_pd_w, l);
  s.mos("pu_q", "q", "qb", "vdd", "vdd", p.cell_pmos, p.sram_pu_w, l);
  s.mos("pd_qb", "qb", "q", "gnd", "gnd", p.cell_nmos, p.sram_pd_w, l);
  s.mos("pu_qb", "qb", "q", "vdd", "vdd", p.cell_pmos, p.sram_pu_w, l);
  s.mos("pg_q", "bl", "wl", "q", "gnd", p.cell_nmos, p.sram_pg_w, l);
  s.mos("pg_qb", "bl_b", "wl", "qb", "gnd", p.cell_nmos, p.sram_pg_w, l);
  return lib.add(std::move(s), tech);
}

inline const GeneratedCell& gen_bitcell(CellLibrary& lib, CellVariant v, const Technology& tech) {
  if (v == CellVariant::SRAM_6T) return gen_sram6t(lib, tech);
  return gen_gain_cell(lib, variant_spec(v, tech), tech);
}

}  // namespace gcram
