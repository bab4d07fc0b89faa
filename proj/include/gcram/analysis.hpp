// SPDX-License-Identifier: Apache-2.0
//
// Analytical area, timing, bandwidth and power of a built bank.
//
// Delays are logical-effort stage sums (tau units) plus RC terms; the read path
// ends at the sense amplifier, the write path at the storage node.

#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gcram/bankgen.hpp"
#include "gcram/logical_effort.hpp"
#include "gcram/models.hpp"
#include "gcram/text.hpp"

namespace gcram {

struct PathDelay {
  std::vector<std::pair<std::string, double>> terms;  ///< name, seconds
  double total() const {
    double t = 0;
    for (const auto& [n, v] : terms) t += v;
    return t;
  }
  double term(const std::string& name) const {
    for (const auto& [n, v] : terms)
      if (n == name) return v;
    return 0;
  }
};

struct AnalysisReport {
  std::string name;
  double area_total = 0;  ///< um^2
  double area_array = 0;  ///< um^2
  double array_efficiency = 0;
  double t_read = 0;  ///< s
  double t_write = 0;
  double f_max = 0;  ///< Hz
  double bw_read = 0;  ///< bit/s
  double bw_write = 0;
  double p_leak = 0;    ///< W
  double e_access = 0;  ///< J, one read plus one write
  PathDelay read_path;
  PathDelay write_path;
};

/// Delay of the AND-tree decoder for `addr_bits` inputs, seconds. Mirrors
/// build_decoder: complement inverter, NAND/INV levels, final inverter into the row NAND2.
inline double decoder_delay(int addr_bits, const Technology& tech) {
  const auto& le = tech.le;
  if (addr_bits <= 0) return 0;
  auto nand_g = [](int m) { return (m + 2.0) / 3.0; };
  double d = 0;
  // each address or complement net fans out to half of the first-level gates through a
  // buffer sized by logical effort
  int outputs = 1 << addr_bits;
  int first = addr_bits == 1 ? 1 : (addr_bits == 2 || addr_bits == 4 ? 2 : 3);
  double fanout = (outputs / 2.0) * (addr_bits == 1 ? 1.0 : nand_g(first));
  double buffer = chain_delay(fanout, chain_stages(fanout, Parity::ANY, le), le);
  if (addr_bits == 1) return buffer + le.tau * 2 * (1.0 + le.p_inv);
  d += buffer / le.tau;
  int n = addr_bits;
  while (n > 1) {
    int chunks = 0, widest = 2;
    for (int pos = 0; pos < n; ++chunks) {
      int rem = n - pos;
      int take = (rem == 2 || rem == 4) ? 2 : 3;
      widest = std::max(widest, take);
      pos += take;
    }
    int next = chunks;
    double load = next > 1 ? nand_g(next == 2 || next == 4 ? 2 : 3) : nand_g(2);
    d += nand_g(widest) * 1.0 + widest;  // nand into unit inverter
    d += 1.0 * load + le.p_inv;          // inverter into the next level or the row gate
    n = next;
  }
  return le.tau * d;
}

/// Row gate (NAND2 of decoder output and enable) driving a unit-input driver chain.
inline double row_gate_delay(const Technology& tech) {
  double g = 4.0 / 3.0, h = 1.0 / g;
  return tech.le.tau * (g * h + 2.0);
}

/// Level shifter: two stages into the unit-input WWL driver.
inline double level_shifter_delay(const Technology& tech) { return 2 * tech.le.tau * (1.0 + tech.le.p_inv); }

/// Distributed wordline wire delay across `cols` cells, Elmore.
inline double wordline_wire_delay(int cols, double cell_w_um, double c_per_cell, const Technology& tech) {
  const auto& w = tech.wire("metal1");
  double r = w.resistance(cell_w_um, tech.params.wl_wire_width);
  return elmore_delay(uniform_ladder(r, c_per_cell, cols));
}

inline double write_bitline_cap(int rows, double cell_h_um, const CellVariantSpec& spec, const Technology& tech) {
  double wire = tech.wire("metal2").c_per_um * cell_h_um;
  if (spec.variant == CellVariant::SRAM_6T)
    return rows * (tech.device(tech.params.cell_nmos).cdrain_per_um * tech.params.sram_pg_w + wire);
  return rows * (tech.device(spec.write_device).cdrain_per_um * tech.params.gc_write_w + wire);
}

/// Write driver pull-down resistance, ohms.
inline double write_driver_resistance(const MemoryConfig& cfg, const Technology& tech) {
  const auto& m = tech.device(tech.params.periphery_nmos);
  return cfg.vdd / device_current(m, cfg.vdd, cfg.vdd, detail::kDriverW, cfg.temperature);
}

inline const DriverChain& driver_of(const BankDesign& d, const std::string& name) {
  for (const auto& s : d.sizing_report)
    if (s.name == name) return s.chain;
  throw std::out_of_range("no driver named " + name);
}

inline PathDelay read_path_delay(const BankDesign& d, const Technology& tech) {
  const auto& cfg = d.config;
  const auto& g = d.geometry;
  const auto& p = tech.params;
  bool sram = d.spec.variant == CellVariant::SRAM_6T;
  PathDelay path;
  double tau = tech.le.tau;
  double t_rbl = bitline_development_time(cfg, d.spec, g.rows, d.cell_h_um, tech);
  double c_cell = sram ? write_wordline_cap(1, d.cell_w_um, d.spec, tech)
                       : read_wordline_cap(1, d.cell_w_um, d.spec, tech);
  path.terms = {
      {"dff", p.dff_delay_tau * tau},
      {"decoder", decoder_delay(g.addr_bits_row, tech)},
      {"row_gate", row_gate_delay(tech)},
      {"wl_driver", driver_of(d, sram ? "wl_driver" : "rwl_driver").modeled_delay},
      {"wl_wire", wordline_wire_delay(g.cols, d.cell_w_um, c_cell, tech)},
      {"bitline", t_rbl},
      {"sense_amp", p.sa_delay_tau * tau},
      {"margin", (p.delay_margin - 1.0) * t_rbl},
  };
  return path;
}

/// Write path. The data DFF and write driver charge the WBL while the address resolves,
/// so only the slower of the wordline rise and the bitline charge precedes the cell write.
inline PathDelay write_path_delay(const BankDesign& d, const Technology& tech) {
  const auto& cfg = d.config;
  const auto& g = d.geometry;
  const auto& p = tech.params;
  bool sram = d.spec.variant == CellVariant::SRAM_6T;
  double tau = tech.le.tau;
  double c_cell = write_wordline_cap(1, d.cell_w_um, d.spec, tech);
  double c_wbl = write_bitline_cap(g.rows, d.cell_h_um, d.spec, tech);
  PathDelay wl;
  wl.terms = {
      {"decoder", decoder_delay(g.addr_bits_row, tech)},
      {"row_gate", row_gate_delay(tech)},
  };
  if (cfg.level_shifted() && !sram) wl.terms.push_back({"level_shifter", level_shifter_delay(tech)});
  wl.terms.push_back({"wl_driver", driver_of(d, sram ? "wl_driver" : "wwl_driver").modeled_delay});
  wl.terms.push_back({"wl_wire", wordline_wire_delay(g.cols, d.cell_w_um, c_cell, tech)});
  double t_bl = std::log(2.0) * write_driver_resistance(cfg, tech) * c_wbl;

  PathDelay path;
  path.terms.push_back({"dff", p.dff_delay_tau * tau});
  if (wl.total() >= t_bl) path.terms.insert(path.terms.end(), wl.terms.begin(), wl.terms.end());
  else path.terms.push_back({"bitline", t_bl});
  path.terms.push_back({"cell", cell_write_time(cfg, d.spec, tech)});
  return path;
}

/// Off current of a device at zero gate drive and full drain bias, amps.
inline double off_current(const TransistorModel& m, double w, const MemoryConfig& cfg) {
  return device_current(m, 0.0, cfg.vdd, w, cfg.temperature);
}

namespace detail {

/// Off-current sum over every transistor reachable from `cell`, half of each gate's devices
/// taken as off. The bitcell array is skipped.
inline double periphery_off_current(const std::string& cell, const CircuitLibrary& lib, const MemoryConfig& cfg,
                                    const Technology& tech, std::map<std::string, double>& memo) {
  if (auto it = memo.find(cell); it != memo.end()) return it->second;
  auto found = lib.find(cell);
  if (found == lib.end()) throw std::out_of_range("leakage: no circuit " + cell);
  const auto& s = found->second;
  double sum = 0;
  for (const auto& dev : s.devices)
    if (dev.kind == DeviceKind::MOS) sum += 0.5 * off_current(tech.device(dev.model), dev.w, cfg);
  for (const auto& inst : s.instances) {
    if (inst.subckt == "bitcell_array") continue;
    sum += periphery_off_current(inst.subckt, lib, cfg, tech, memo);
  }
  memo[cell] = sum;
  return sum;
}

}  // namespace detail

/// Supply-to-ground static power, watts.
inline double leakage_power(const BankDesign& d, const Technology& tech) {
  const auto& cfg = d.config;
  const auto& p = tech.params;
  std::map<std::string, double> memo;
  auto lib = d.circuits();
  lib.emplace(d.top.name, d.top);
  double i = detail::periphery_off_current(d.top.name, lib, cfg, tech, memo);
  if (d.spec.variant == CellVariant::SRAM_6T) {
    double per_cell = off_current(tech.device(p.cell_nmos), p.sram_pd_w, cfg) +
                      off_current(tech.device(p.cell_pmos), p.sram_pu_w, cfg);
    i += per_cell * d.geometry.rows * d.geometry.cols;
  }
  return i * cfg.vdd;
}

/// Dynamic energy of one read plus one write. Activity: selected wordline 1,
/// bitlines of the selected word 0.5.
inline double access_energy(const BankDesign& d, const Technology& tech) {
  const auto& cfg = d.config;
  const auto& g = d.geometry;
  double v2 = cfg.vdd * cfg.vdd;
  double c_wwl = write_wordline_cap(g.cols, d.cell_w_um, d.spec, tech);
  double c_wbl = write_bitline_cap(g.rows, d.cell_h_um, d.spec, tech);
  double c_rbl = read_bitline_cap(g.rows, d.cell_h_um, d.spec, tech);
  int ws = cfg.word_size;
  if (d.spec.variant == CellVariant::SRAM_6T) {
    // the single wordline fires for both operations; both bitlines of each bit move
    return 2 * c_wwl * v2 + 2 * (0.5 * 2 * ws * c_rbl * v2);
  }
  double c_rwl = read_wordline_cap(g.cols, d.cell_w_um, d.spec, tech);
  double vw = wwl_high(cfg);
  return c_wwl * vw * vw + 0.5 * ws * c_wbl * v2 + c_rwl * v2 + 0.5 * ws * c_rbl * v2;
}

inline AnalysisReport analyze(const BankDesign& d, const Technology& tech) {
  AnalysisReport r;
  r.name = d.top.name;
  const auto& g = d.geometry;
  r.area_total = static_cast<double>(d.layout.boundary.area()) / (double(tech.dbu_per_um) * tech.dbu_per_um);
  r.area_array = g.rows * g.cols * d.cell_w_um * d.cell_h_um;
  r.array_efficiency = r.area_total > 0 ? r.area_array / r.area_total : 0;
  r.read_path = read_path_delay(d, tech);
  r.write_path = write_path_delay(d, tech);
  r.t_read = r.read_path.total();
  r.t_write = r.write_path.total();
  r.f_max = 1.0 / std::max(r.t_read, r.t_write);
  double ports = d.spec.variant == CellVariant::SRAM_6T ? 0.5 : 1.0;
  r.bw_read = d.config.word_size * r.f_max * ports;
  r.bw_write = r.bw_read;
  r.p_leak = leakage_power(d, tech);
  r.e_access = access_energy(d, tech);
  return r;
}

/// `metric = value unit` lines.
inline std::string to_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << "name = " << r.name << "\n"
     << "area_total = " << text::num(r.area_total) << " um^2\n"
     << "area_array = " << text::num(r.area_array) << " um^2\n"
     << "array_efficiency = " << text::num(r.array_efficiency) << "\n"
     << "t_read = " << text::num(r.t_read) << " s\n"
     << "t_write = " << text::num(r.t_write) << " s\n"
     << "f_max = " << text::num(r.f_max) << " Hz\n"
     << "bw_read = " << text::num(r.bw_read) << " bit/s\n"
     << "bw_write = " << text::num(r.bw_write) << " bit/s\n"
     << "p_leak = " << text::num(r.p_leak) << " W\n"
     << "e_access = " << text::num(r.e_access) << " J\n";
  for (const auto& [n, v] : r.read_path.terms) os << "t_read." << n << " = " << text::num(v) << " s\n";
  for (const auto& [n, v] : r.write_path.terms) os << "t_write." << n << " = " << text::num(v) << " s\n";
  return os.str();
}

inline std::string csv_header() {
  return "name,area_total_um2,area_array_um2,array_efficiency,t_read_s,t_write_s,f_max_hz,bw_read_bps,bw_write_bps,"
         "p_leak_w,e_access_j";
}

inline std::string to_csv_row(const AnalysisReport& r) {
  std::ostringstream os;
  os << r.name;
  for (double v : {r.area_total, r.area_array, r.array_efficiency, r.t_read, r.t_write, r.f_max, r.bw_read, r.bw_write,
                   r.p_leak, r.e_access})
    os << "," << text::num(v);
  return os.str();
}

}  // namespace gcram
