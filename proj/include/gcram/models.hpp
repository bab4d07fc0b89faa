// SPDX-License-Identifier: Apache-2.0
//
// Electrical models of a bitcell column: storage-node capacitance and levels,
// read-cell current, bitline capacitance and bitline development time.

#pragma once

#include <algorithm>
#include <cmath>

#include "gcram/cellgen.hpp"
#include "gcram/config.hpp"
#include "gcram/technology.hpp"

namespace gcram {

/// Storage-node capacitance: read-device gate plus fixed wiring, farads.
inline double storage_cap(const CellVariantSpec& spec, const Technology& tech) {
  return tech.device(spec.read_device).cgate_per_um * tech.params.gc_read_w + tech.params.c_sn_wire;
}

/// Write wordline high level.
inline double wwl_high(const MemoryConfig& cfg) { return cfg.level_shifted() ? cfg.boost_voltage() : cfg.vdd; }

/// Written '1' level: source-follower clamp at wwl - vt of the nominal write device, capped at vdd.
inline double written_one(const MemoryConfig& cfg, const CellVariantSpec& spec, const Technology& tech) {
  if (spec.variant == CellVariant::SRAM_6T) return cfg.vdd;
  double vt = tech.device(spec.write_device).vt0;
  return std::clamp(wwl_high(cfg) - vt, 0.0, cfg.vdd);
}

/// Write device model with the configured threshold offset applied.
inline TransistorModel write_model(const MemoryConfig& cfg, const CellVariantSpec& spec, const Technology& tech) {
  return shift_vt(tech.device(spec.write_device), cfg.write_vt_offset);
}

/// Read current of the worst-case stored value, amps.
///  - n-type read device: stored '1' at the written level, rwl at 0, rbl at vdd
///  - p-type read device: stored '0', rwl at vdd, rbl at 0
///  - SRAM: pass gate in series with the pull-down, half the pass-gate current
inline double read_cell_current(const MemoryConfig& cfg, const CellVariantSpec& spec, const Technology& tech) {
  double t = cfg.temperature;
  if (spec.variant == CellVariant::SRAM_6T) {
    const auto& m = tech.device(tech.params.cell_nmos);
    return 0.5 * device_current(m, cfg.vdd, cfg.vdd, tech.params.sram_pg_w, t);
  }
  const auto& m = tech.device(spec.read_device);
  double w = tech.params.gc_read_w;
  if (m.is_pmos()) return device_current(m, cfg.vdd, cfg.vdd, w, t);
  return device_current(m, written_one(cfg, spec, tech), cfg.vdd, w, t);
}

/// Read bitline capacitance for `rows` cells of height `cell_h_um`, farads.
inline double read_bitline_cap(int rows, double cell_h_um, const CellVariantSpec& spec, const Technology& tech) {
  double w = spec.variant == CellVariant::SRAM_6T ? tech.params.sram_pg_w : tech.params.gc_read_w;
  double cd = tech.device(spec.read_device).cdrain_per_um * w;
  return rows * (cd + tech.wire("metal2").c_per_um * cell_h_um);
}

/// Time for the read bitline to move by the sense margin, seconds.
inline double bitline_development_time(const MemoryConfig& cfg, const CellVariantSpec& spec, int rows,
                                       double cell_h_um, const Technology& tech) {
  return read_bitline_cap(rows, cell_h_um, spec, tech) * tech.params.dv_sense / read_cell_current(cfg, spec, tech);
}

/// Reference voltage of the single-ended sense amplifier.
inline double vref_level(const MemoryConfig& cfg, const Technology& tech) { return tech.params.vref_ratio * cfg.vdd; }

/// Write wordline (SRAM: the single wordline) capacitance across `cols` cells, farads.
inline double write_wordline_cap(int cols, double cell_w_um, const CellVariantSpec& spec, const Technology& tech) {
  double wire = tech.wire("metal1").c_per_um * cell_w_um;
  if (spec.variant == CellVariant::SRAM_6T)
    return cols * (2 * tech.device(tech.params.cell_nmos).cgate_per_um * tech.params.sram_pg_w + wire);
  return cols * (tech.device(spec.write_device).cgate_per_um * tech.params.gc_write_w + wire);
}

/// Read wordline capacitance: read-device source diffusion per cell plus wire, farads.
inline double read_wordline_cap(int cols, double cell_w_um, const CellVariantSpec& spec, const Technology& tech) {
  double wire = tech.wire("metal1").c_per_um * cell_w_um;
  return cols * (tech.device(spec.read_device).cdrain_per_um * tech.params.gc_read_w + wire);
}

/// Storage-node write time: on-resistance of the write path times the node
/// capacitance, to within 5% of the final level (ln 20 time constants).
inline double cell_write_time(const MemoryConfig& cfg, const CellVariantSpec& spec, const Technology& tech) {
  const auto& p = tech.params;
  if (spec.variant == CellVariant::SRAM_6T) {
    const auto& n = tech.device(p.cell_nmos);
    const auto& pm = tech.device(p.cell_pmos);
    double c_node = n.cgate_per_um * p.sram_pd_w + pm.cgate_per_um * p.sram_pu_w + n.cdrain_per_um * p.sram_pg_w;
    double r_on = cfg.vdd / device_current(n, cfg.vdd, cfg.vdd, p.sram_pg_w, cfg.temperature);
    return r_on * c_node * std::log(20.0);
  }
  auto m = write_model(cfg, spec, tech);
  double r_on = cfg.vdd / device_current(m, wwl_high(cfg), cfg.vdd, p.gc_write_w, cfg.temperature);
  return r_on * storage_cap(spec, tech) * std::log(20.0);
}

}  // namespace gcram
