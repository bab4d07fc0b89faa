// SPDX-License-Identifier: Apache-2.0
//
// Bank netlist assembly. A gain-cell bank has separate write and read ports:
//
//              read_port_data (conditioners, column mux, sense amps, vref)
//   write_port_address   bitcell_array   read_port_address
//              write_port_data (din DFFs, write drivers, column mux)
//
// plus write_control and read_control. The 6T SRAM reference is single-ported:
// port_address, port_data and control.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "gcram/blocks.hpp"
#include "gcram/cellgen.hpp"
#include "gcram/config.hpp"
#include "gcram/models.hpp"
#include "gcram/periphery.hpp"

namespace gcram {

enum class PinRole { CLOCK, ADDRESS, DATA_IN, DATA_OUT, ENABLE, SUPPLY };

inline std::string_view to_string(PinRole r) {
  switch (r) {
    case PinRole::CLOCK: return "clock";
    case PinRole::ADDRESS: return "address";
    case PinRole::DATA_IN: return "data_in";
    case PinRole::DATA_OUT: return "data_out";
    case PinRole::ENABLE: return "enable";
    case PinRole::SUPPLY: return "supply";
  }
  return "?";
}

struct SizedDriver {
  std::string name;
  DriverChain chain;
  bool operator==(const SizedDriver&) const = default;
};

/// Where each block sits around the array. Column/row in a 3x3 grid, array at (1, 1).
struct BlockSlot {
  std::string instance;
  int col = 1;
  int row = 1;
};

struct BankDesign {
  MemoryConfig config;
  DerivedGeometry geometry;
  CellVariantSpec spec;
  CellLibrary cells;       ///< leaf cells with layouts
  CircuitLibrary blocks;   ///< composite subcircuits (array, decoders, chains, port blocks)
  Subckt top;
  std::map<std::string, PinRole> pin_map;
  std::vector<SizedDriver> sizing_report;
  std::vector<BlockSlot> slots;
  int delay_chain_stages = 0;        ///< read (SRAM: sense) timing chain
  int write_delay_chain_stages = 0;  ///< 0 for SRAM
  double cell_w_um = 0;
  double cell_h_um = 0;
  double t_rbl = 0;  ///< modeled read bitline development time, s

  LayoutCell layout;      ///< filled by floorplan_bank
  LayoutLibrary layouts;  ///< every cell referenced from `layout`

  /// Leaf cells and composite blocks together.
  CircuitLibrary circuits() const {
    auto lib = cells.circuits();
    for (const auto& [n, s] : blocks) lib.emplace(n, s);
    return lib;
  }
  std::string spice() const { return emit_spice(top, circuits()); }
};

/// Gate capacitance presented by `port` of `cell`, following instances down to devices.
inline double port_gate_cap(const CircuitLibrary& lib, const std::string& cell, const std::string& port,
                            const Technology& tech) {
  const auto& s = lib.at(cell);
  double c = 0;
  for (const auto& d : s.devices)
    if (d.kind == DeviceKind::MOS && d.terminals[1] == port) c += tech.device(d.model).cgate_per_um * d.w;
  for (const auto& inst : s.instances) {
    const auto& child = lib.at(inst.subckt);
    for (size_t k = 0; k < inst.connections.size(); ++k)
      if (inst.connections[k] == port) c += port_gate_cap(lib, inst.subckt, child.ports[k], tech);
  }
  return c;
}

namespace detail {

/// Sizing and subcircuit bookkeeping shared by the block builders.
struct BankBuilder {
  const MemoryConfig& cfg;
  const Technology& tech;
  BankDesign& d;

  CircuitLibrary lib() const { return d.circuits(); }

  void add_block(Subckt s) { d.blocks.insert_or_assign(s.name, std::move(s)); }

  std::string gate(GateKind k) { return gen_gate(d.cells, k, tech.le.unit_w, tech).circuit.name; }
  std::string dff() { return gen_dff(d.cells, tech).circuit.name; }

  /// Sizes a chain for `load`, registers its subcircuit and logs it.
  std::string driver(const std::string& name, double load, Parity parity) {
    auto chain = size_driver(load, tech, parity);
    add_block(build_driver_chain(name, chain, d.cells, tech));
    d.sizing_report.push_back({name, chain});
    return name;
  }

  std::string decoder(int bits) {
    auto s = build_decoder(bits, d.cells, tech);
    auto name = s.name;
    add_block(std::move(s));
    return name;
  }

  /// Returns (name, stages).
  std::pair<std::string, int> delay_chain(double target) {
    auto [s, n] = build_delay_chain(target, d.cells, tech);
    auto name = s.name;
    add_block(std::move(s));
    return {name, n};
  }

  double cap(const std::string& cell, const std::string& port) { return port_gate_cap(lib(), cell, port, tech); }
};

inline std::vector<std::string> bus_nets(const std::string& base, int n, int from = 0) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(text::bus(base, from + i));
  return v;
}

inline void append(std::vector<std::string>& v, const std::vector<std::string>& more) {
  v.insert(v.end(), more.begin(), more.end());
}

}  // namespace detail

/// rows x cols bitcell array. Gain cell ports: wwl[r], rwl[r], wbl[c], rbl[c], gnd.
/// SRAM ports: wl[r], bl[c], bl_b[c], vdd, gnd.
inline Subckt build_array(const DerivedGeometry& g, CellVariant v, CellLibrary& cells, const Technology& tech) {
  const auto& cell = gen_bitcell(cells, v, tech).circuit.name;
  using detail::append;
  using detail::bus_nets;
  Subckt s;
  s.name = "bitcell_array";
  bool sram = v == CellVariant::SRAM_6T;
  if (sram) {
    s.ports = bus_nets("wl", g.rows);
    append(s.ports, bus_nets("bl", g.cols));
    append(s.ports, bus_nets("bl_b", g.cols));
    append(s.ports, {"vdd", "gnd"});
  } else {
    s.ports = bus_nets("wwl", g.rows);
    append(s.ports, bus_nets("rwl", g.rows));
    append(s.ports, bus_nets("wbl", g.cols));
    append(s.ports, bus_nets("rbl", g.cols));
    s.ports.push_back("gnd");
  }
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) {
      std::string name = "r" + std::to_string(r) + "_c" + std::to_string(c);
      if (sram)
        s.inst(name, cell, {text::bus("wl", r), text::bus("bl", c), text::bus("bl_b", c), "vdd", "gnd"});
      else
        s.inst(name, cell,
               {text::bus("wwl", r), text::bus("wbl", c), text::bus("rwl", r), text::bus("rbl", c), "gnd"});
    }
  return s;
}

namespace detail {

/// Row decoder gated by `enable`, then one wordline driver per row.
/// Ports: a[..], <enable>, <wl>[..], vdd, gnd (+ vwwl when level shifted).
inline Subckt row_port(BankBuilder& b, const std::string& name, const std::string& enable, const std::string& wl,
                       const std::string& driver, bool level_shift) {
  const auto& g = b.d.geometry;
  Subckt s;
  s.name = name;
  s.ports = bus_nets("a", g.addr_bits_row);
  s.ports.push_back(enable);
  append(s.ports, bus_nets(wl, g.rows));
  append(s.ports, {"vdd", "gnd"});
  if (level_shift) s.ports.push_back("vwwl");
  auto dec = b.decoder(g.addr_bits_row);
  auto dec_nets = bus_nets("a", g.addr_bits_row);
  append(dec_nets, bus_nets("dec", g.rows));
  append(dec_nets, {"vdd", "gnd"});
  s.inst("dec", dec, dec_nets);
  auto nand = b.gate(GateKind::NAND2);
  std::string ls = level_shift ? gen_level_shifter(b.d.cells, b.tech).circuit.name : "";
  std::string rail = level_shift ? "vwwl" : "vdd";
  for (int r = 0; r < g.rows; ++r) {
    auto rs = std::to_string(r);
    std::string sel = text::bus("sel_b", r);
    s.inst("nand" + rs, nand, {text::bus("dec", r), enable, sel, "vdd", "gnd"});
    if (level_shift) {
      std::string shifted = text::bus("ls", r);
      s.inst("ls" + rs, ls, {sel, shifted, "vdd", "vwwl", "gnd"});
      sel = shifted;
    }
    s.inst("drv" + rs, driver, {sel, text::bus(wl, r), rail, "gnd"});
  }
  return s;
}

/// Optional column decoder + pass-gate mux between `bl` columns and `out` word bits.
/// Returns the nets the per-bit circuitry should attach to.
inline std::vector<std::string> column_select(BankBuilder& b, Subckt& s, const std::string& tag,
                                              const std::string& bl, const std::string& out) {
  const auto& g = b.d.geometry;
  int bits = b.cfg.word_size;
  if (g.words_per_row == 1) return bus_nets(bl, bits);
  auto dec = b.decoder(g.addr_bits_col);
  auto nets = bus_nets("ca", g.addr_bits_col);
  append(nets, bus_nets(tag + "sel", g.words_per_row));
  append(nets, {"vdd", "gnd"});
  s.inst(tag + "cdec", dec, nets);
  auto mux = gen_column_mux(b.d.cells, b.tech).circuit.name;
  for (int c = 0; c < g.cols; ++c)
    s.inst(tag + "mux" + std::to_string(c), mux,
           {text::bus(bl, c), text::bus(tag + "sel", c % g.words_per_row), text::bus(out, c / g.words_per_row),
            "gnd"});
  return bus_nets(out, bits);
}

inline Subckt write_port_data(BankBuilder& b) {
  const auto& g = b.d.geometry;
  int bits = b.cfg.word_size;
  Subckt s;
  s.name = "write_port_data";
  s.ports = {"clk_w", "wen"};
  append(s.ports, bus_nets("din", bits));
  append(s.ports, bus_nets("ca", g.addr_bits_col));
  append(s.ports, bus_nets("wbl", g.cols));
  append(s.ports, {"vdd", "gnd"});
  auto ff = b.dff();
  auto wd = gen_write_driver(b.d.cells, b.tech).circuit.name;
  auto targets = column_select(b, s, "w", "wbl", "wm");
  for (int i = 0; i < bits; ++i) {
    auto is = std::to_string(i);
    s.inst("din_dff" + is, ff, {text::bus("din", i), "clk_w", text::bus("dq", i), "vdd", "gnd"});
    s.inst("wd" + is, wd, {text::bus("dq", i), "wen", targets[i], "vdd", "gnd"});
  }
  return s;
}

inline Subckt read_port_data(BankBuilder& b) {
  const auto& g = b.d.geometry;
  const auto& spec = b.d.spec;
  int bits = b.cfg.word_size;
  Subckt s;
  s.name = "read_port_data";
  s.ports = {"pc_en_b", "sa_en"};
  append(s.ports, bus_nets("ca", g.addr_bits_col));
  append(s.ports, bus_nets("rbl", g.cols));
  append(s.ports, bus_nets("dout", bits));
  append(s.ports, {"vdd", "gnd"});
  const auto& cond = gen_bl_conditioner(b.d.cells, spec.read_bl_conditioning, b.tech).circuit.name;
  if (spec.read_bl_conditioning == Conditioning::PREDISCHARGE) {
    // predischarge wants an active-high enable; invert the shared active-low one
    auto inv = b.driver("pc_inv", g.cols * b.cap(cond, "en"), Parity::INVERTING);
    s.inst("pc_inv", inv, {"pc_en_b", "pc_en", "vdd", "gnd"});
    for (int c = 0; c < g.cols; ++c) s.inst("cond" + std::to_string(c), cond, {text::bus("rbl", c), "pc_en", "gnd"});
  } else {
    for (int c = 0; c < g.cols; ++c)
      s.inst("cond" + std::to_string(c), cond, {text::bus("rbl", c), "pc_en_b", "vdd"});
  }
  auto sources = column_select(b, s, "r", "rbl", "rm");
  auto sa = gen_sense_amp(b.d.cells, b.tech).circuit.name;
  for (int i = 0; i < bits; ++i)
    s.inst("sa" + std::to_string(i), sa, {sources[i], "vref", "sa_en", text::bus("dout", i), "vdd", "gnd"});
  s.inst("vref", gen_vref_stub(b.d.cells, b.tech).circuit.name, {"vref", "vdd", "gnd"});
  return s;
}

/// Command DFF, address DFFs and a clock delay chain shared by both control blocks.
/// Leaves `<cmd>_q` and the active-high command `<op>` in the subcircuit.
inline void control_front(BankBuilder& b, Subckt& s, const std::string& clk, const std::string& cmd,
                          const std::string& addr_in, const std::string& addr_out, const std::string& op) {
  int abits = b.d.geometry.addr_bits_row + b.d.geometry.addr_bits_col;
  auto ff = b.dff();
  s.inst(cmd + "_dff", ff, {cmd, clk, cmd + "_q", "vdd", "gnd"});
  s.inst(op + "_inv", b.gate(GateKind::INV), {cmd + "_q", op, "vdd", "gnd"});
  for (int i = 0; i < abits; ++i)
    s.inst("addr_dff" + std::to_string(i), ff, {text::bus(addr_in, i), clk, text::bus(addr_out, i), "vdd", "gnd"});
}

inline Subckt write_control(BankBuilder& b) {
  const auto& g = b.d.geometry;
  int abits = g.addr_bits_row + g.addr_bits_col;
  Subckt s;
  s.name = "write_control";
  s.ports = {"clk_w", "web"};
  append(s.ports, bus_nets("waddr", abits));
  append(s.ports, bus_nets("wa", abits));
  append(s.ports, {"wen", "vdd", "gnd"});
  control_front(b, s, "clk_w", "web", "waddr", "wa", "we");
  // enables follow the address DFFs by one clock-to-q
  auto [dly, n] = b.delay_chain(b.tech.le.tau * b.tech.params.dff_delay_tau);
  b.d.write_delay_chain_stages = n;
  s.inst("dly", dly, {"clk_w", "clk_w_d", "vdd", "gnd"});
  s.inst("wen_and", b.gate(GateKind::AND2), {"we", "clk_w_d", "wen_pre", "vdd", "gnd"});
  double load = g.rows * b.cap(b.gate(GateKind::NAND2), "b") +
                b.cfg.word_size * b.cap(gen_write_driver(b.d.cells, b.tech).circuit.name, "en");
  s.inst("wen_drv", b.driver("wen_driver", load, Parity::NON_INVERTING), {"wen_pre", "wen", "vdd", "gnd"});
  return s;
}

inline Subckt read_control(BankBuilder& b) {
  const auto& g = b.d.geometry;
  const auto& spec = b.d.spec;
  int abits = g.addr_bits_row + g.addr_bits_col;
  Subckt s;
  s.name = "read_control";
  s.ports = {"clk_r", "reb"};
  append(s.ports, bus_nets("raddr", abits));
  append(s.ports, bus_nets("ra", abits));
  append(s.ports, {"ren", "sa_en", "pc_en_b", "vdd", "gnd"});
  control_front(b, s, "clk_r", "reb", "raddr", "ra", "re");
  auto and2 = b.gate(GateKind::AND2);
  s.inst("ren_and", and2, {"re", "clk_r", "ren_pre", "vdd", "gnd"});
  s.inst("ren_drv", b.driver("ren_driver", g.rows * b.cap(b.gate(GateKind::NAND2), "b"), Parity::NON_INVERTING),
         {"ren_pre", "ren", "vdd", "gnd"});
  auto [dly, n] = b.delay_chain(b.tech.params.delay_margin * b.d.t_rbl);
  b.d.delay_chain_stages = n;
  s.inst("dly", dly, {"clk_r", "clk_r_d", "vdd", "gnd"});
  s.inst("sae_and", and2, {"re", "clk_r_d", "sae_pre", "vdd", "gnd"});
  double sa_load = b.cfg.word_size * b.cap(gen_sense_amp(b.d.cells, b.tech).circuit.name, "en");
  s.inst("sae_drv", b.driver("sae_driver", sa_load, Parity::NON_INVERTING), {"sae_pre", "sa_en", "vdd", "gnd"});
  double pc_load = spec.read_bl_conditioning == Conditioning::PRECHARGE
                       ? g.cols * b.cap(gen_bl_conditioner(b.d.cells, Conditioning::PRECHARGE, b.tech).circuit.name,
                                        "en_b")
                       : b.cap("pc_inv", "in");
  s.inst("pc_drv", b.driver("pc_driver", pc_load, Parity::NON_INVERTING), {"clk_r", "pc_en_b", "vdd", "gnd"});
  return s;
}

inline Subckt sram_port_data(BankBuilder& b) {
  const auto& g = b.d.geometry;
  const auto& tech = b.tech;
  int bits = b.cfg.word_size;
  Subckt s;
  s.name = "port_data";
  s.ports = {"clk", "wen", "sa_en", "pc_en_b"};
  append(s.ports, bus_nets("din", bits));
  append(s.ports, bus_nets("ca", g.addr_bits_col));
  append(s.ports, bus_nets("bl", g.cols));
  append(s.ports, bus_nets("bl_b", g.cols));
  append(s.ports, bus_nets("dout", bits));
  append(s.ports, {"vdd", "gnd"});
  auto pre = gen_bl_conditioner(b.d.cells, Conditioning::PRECHARGE, tech, true).circuit.name;
  for (int c = 0; c < g.cols; ++c)
    s.inst("pre" + std::to_string(c), pre, {text::bus("bl", c), text::bus("bl_b", c), "pc_en_b", "vdd"});
  std::string t = "bl", tb = "bl_b";
  if (g.words_per_row > 1) {
    auto dec = b.decoder(g.addr_bits_col);
    auto nets = bus_nets("ca", g.addr_bits_col);
    append(nets, bus_nets("sel", g.words_per_row));
    append(nets, {"vdd", "gnd"});
    s.inst("cdec", dec, nets);
    auto mux = gen_column_mux(b.d.cells, tech, true).circuit.name;
    for (int c = 0; c < g.cols; ++c) {
      int k = c % g.words_per_row, i = c / g.words_per_row;
      s.inst("mux" + std::to_string(c), mux,
             {text::bus("bl", c), text::bus("bl_b", c), text::bus("sel", k), text::bus("m", i), text::bus("mb", i),
              "gnd"});
    }
    t = "m";
    tb = "mb";
  }
  auto ff = b.dff();
  auto wd = gen_write_driver(b.d.cells, tech, true).circuit.name;
  auto sa = gen_sense_amp(b.d.cells, tech, true).circuit.name;
  for (int i = 0; i < bits; ++i) {
    auto is = std::to_string(i);
    s.inst("din_dff" + is, ff, {text::bus("din", i), "clk", text::bus("dq", i), "vdd", "gnd"});
    s.inst("wd" + is, wd, {text::bus("dq", i), "wen", text::bus(t, i), text::bus(tb, i), "vdd", "gnd"});
    s.inst("sa" + is, sa, {text::bus(t, i), text::bus(tb, i), "sa_en", text::bus("dout", i), "vdd", "gnd"});
  }
  return s;
}

inline Subckt sram_control(BankBuilder& b) {
  const auto& g = b.d.geometry;
  const auto& tech = b.tech;
  int abits = g.addr_bits_row + g.addr_bits_col;
  Subckt s;
  s.name = "control";
  s.ports = {"clk", "web"};
  append(s.ports, bus_nets("addr", abits));
  append(s.ports, bus_nets("a", abits));
  append(s.ports, {"wl_en", "wen", "sa_en", "pc_en_b", "vdd", "gnd"});
  control_front(b, s, "clk", "web", "addr", "a", "we");
  auto and2 = b.gate(GateKind::AND2);
  s.inst("wl_drv", b.driver("wl_en_driver", g.rows * b.cap(b.gate(GateKind::NAND2), "b"), Parity::NON_INVERTING),
         {"clk", "wl_en", "vdd", "gnd"});
  s.inst("wen_and", and2, {"we", "clk", "wen_pre", "vdd", "gnd"});
  double wd_load = b.cfg.word_size * b.cap(gen_write_driver(b.d.cells, tech, true).circuit.name, "en");
  s.inst("wen_drv", b.driver("wen_driver", wd_load, Parity::NON_INVERTING), {"wen_pre", "wen", "vdd", "gnd"});
  auto [dly, n] = b.delay_chain(tech.params.delay_margin * b.d.t_rbl);
  b.d.delay_chain_stages = n;
  s.inst("dly", dly, {"clk", "clk_d", "vdd", "gnd"});
  s.inst("sae_and", and2, {"web_q", "clk_d", "sae_pre", "vdd", "gnd"});
  double sa_load = b.cfg.word_size * b.cap(gen_sense_amp(b.d.cells, tech, true).circuit.name, "en");
  s.inst("sae_drv", b.driver("sae_driver", sa_load, Parity::NON_INVERTING), {"sae_pre", "sa_en", "vdd", "gnd"});
  double pc_load =
      g.cols * b.cap(gen_bl_conditioner(b.d.cells, Conditioning::PRECHARGE, tech, true).circuit.name, "en_b");
  s.inst("pc_drv", b.driver("pc_driver", pc_load, Parity::NON_INVERTING), {"clk", "pc_en_b", "vdd", "gnd"});
  return s;
}

inline std::vector<std::string> row_bits(const std::string& base, const DerivedGeometry& g) {
  return bus_nets(base, g.addr_bits_row, g.addr_bits_col);
}
inline std::vector<std::string> col_bits(const std::string& base, const DerivedGeometry& g) {
  return bus_nets(base, g.addr_bits_col);
}

inline void gcram_top(BankBuilder& b) {
  auto& d = b.d;
  const auto& g = d.geometry;
  int abits = g.addr_bits_row + g.addr_bits_col;
  int bits = b.cfg.word_size;
  bool ls = b.cfg.level_shifted();
  double wwl_load = write_wordline_cap(g.cols, d.cell_w_um, d.spec, b.tech);
  double rwl_load = read_wordline_cap(g.cols, d.cell_w_um, d.spec, b.tech);
  auto wdrv = b.driver("wwl_driver", wwl_load, Parity::INVERTING);
  auto rdrv = b.driver("rwl_driver", rwl_load,
                       d.spec.rwl_polarity == RwlPolarity::ACTIVE_LOW ? Parity::NON_INVERTING : Parity::INVERTING);
  b.add_block(row_port(b, "write_port_address", "wen", "wwl", wdrv, ls));
  b.add_block(row_port(b, "read_port_address", "ren", "rwl", rdrv, false));
  b.add_block(write_port_data(b));
  b.add_block(read_port_data(b));
  b.add_block(write_control(b));
  b.add_block(read_control(b));

  auto& top = d.top;
  top.ports = {"clk_w", "clk_r", "web", "reb"};
  append(top.ports, bus_nets("waddr", abits));
  append(top.ports, bus_nets("raddr", abits));
  append(top.ports, bus_nets("din", bits));
  append(top.ports, bus_nets("dout", bits));
  append(top.ports, {"vdd", "gnd"});
  if (ls) top.ports.push_back("vwwl");

  top.inst("array", "bitcell_array", d.blocks.at("bitcell_array").ports);
  auto nets = bus_nets("waddr", abits);
  append(nets, bus_nets("wa", abits));
  top.inst("write_control", "write_control", [&] {
    std::vector<std::string> v = {"clk_w", "web"};
    append(v, nets);
    append(v, {"wen", "vdd", "gnd"});
    return v;
  }());
  nets = bus_nets("raddr", abits);
  append(nets, bus_nets("ra", abits));
  top.inst("read_control", "read_control", [&] {
    std::vector<std::string> v = {"clk_r", "reb"};
    append(v, nets);
    append(v, {"ren", "sa_en", "pc_en_b", "vdd", "gnd"});
    return v;
  }());
  auto wpa = row_bits("wa", g);
  append(wpa, {"wen"});
  append(wpa, bus_nets("wwl", g.rows));
  append(wpa, {"vdd", "gnd"});
  if (ls) wpa.push_back("vwwl");
  top.inst("write_port_address", "write_port_address", wpa);
  auto rpa = row_bits("ra", g);
  append(rpa, {"ren"});
  append(rpa, bus_nets("rwl", g.rows));
  append(rpa, {"vdd", "gnd"});
  top.inst("read_port_address", "read_port_address", rpa);
  std::vector<std::string> wpd = {"clk_w", "wen"};
  append(wpd, bus_nets("din", bits));
  append(wpd, col_bits("wa", g));
  append(wpd, bus_nets("wbl", g.cols));
  append(wpd, {"vdd", "gnd"});
  top.inst("write_port_data", "write_port_data", wpd);
  std::vector<std::string> rpd = {"pc_en_b", "sa_en"};
  append(rpd, col_bits("ra", g));
  append(rpd, bus_nets("rbl", g.cols));
  append(rpd, bus_nets("dout", bits));
  append(rpd, {"vdd", "gnd"});
  top.inst("read_port_data", "read_port_data", rpd);

  for (const auto& p : {"clk_w", "clk_r"}) d.pin_map[p] = PinRole::CLOCK;
  for (const auto& p : {"web", "reb"}) d.pin_map[p] = PinRole::ENABLE;
  for (const auto& base : {"waddr", "raddr"})
    for (const auto& p : bus_nets(base, abits)) d.pin_map[p] = PinRole::ADDRESS;
  d.slots = {{"array", 1, 1},         {"write_port_address", 0, 1}, {"read_port_address", 2, 1},
             {"write_port_data", 1, 0}, {"read_port_data", 1, 2},     {"write_control", 0, 0},
             {"read_control", 2, 2}};
}

inline void sram_top(BankBuilder& b) {
  auto& d = b.d;
  const auto& g = d.geometry;
  int abits = g.addr_bits_row + g.addr_bits_col;
  int bits = b.cfg.word_size;
  auto drv = b.driver("wl_driver", write_wordline_cap(g.cols, d.cell_w_um, d.spec, b.tech), Parity::INVERTING);
  b.add_block(row_port(b, "port_address", "wl_en", "wl", drv, false));
  b.add_block(sram_port_data(b));
  b.add_block(sram_control(b));

  auto& top = d.top;
  top.ports = {"clk", "web"};
  append(top.ports, bus_nets("addr", abits));
  append(top.ports, bus_nets("din", bits));
  append(top.ports, bus_nets("dout", bits));
  append(top.ports, {"vdd", "gnd"});

  top.inst("array", "bitcell_array", d.blocks.at("bitcell_array").ports);
  std::vector<std::string> ctl = {"clk", "web"};
  append(ctl, bus_nets("addr", abits));
  append(ctl, bus_nets("a", abits));
  append(ctl, {"wl_en", "wen", "sa_en", "pc_en_b", "vdd", "gnd"});
  top.inst("control", "control", ctl);
  auto pa = row_bits("a", g);
  append(pa, {"wl_en"});
  append(pa, bus_nets("wl", g.rows));
  append(pa, {"vdd", "gnd"});
  top.inst("port_address", "port_address", pa);
  std::vector<std::string> pd = {"clk", "wen", "sa_en", "pc_en_b"};
  append(pd, bus_nets("din", bits));
  append(pd, col_bits("a", g));
  append(pd, bus_nets("bl", g.cols));
  append(pd, bus_nets("bl_b", g.cols));
  append(pd, bus_nets("dout", bits));
  append(pd, {"vdd", "gnd"});
  top.inst("port_data", "port_data", pd);

  d.pin_map["clk"] = PinRole::CLOCK;
  d.pin_map["web"] = PinRole::ENABLE;
  for (const auto& p : bus_nets("addr", abits)) d.pin_map[p] = PinRole::ADDRESS;
  d.slots = {{"array", 1, 1}, {"port_address", 0, 1}, {"port_data", 1, 0}, {"control", 0, 0}};
}

}  // namespace detail

inline std::string bank_name(const MemoryConfig& cfg) {
  return text::lower(cfg.cell_variant == CellVariant::SRAM_6T ? "sram" : "gcram") + "_" +
         text::lower(to_string(cfg.cell_variant)) + "_" + std::to_string(cfg.word_size) + "x" +
         std::to_string(cfg.num_words) + (cfg.level_shifted() ? "_ls" : "");
}

/// Netlist, sizing and pin roles of a bank. The layout is left empty; see floorplan_bank.
inline BankDesign assemble_bank(const MemoryConfig& cfg, const Technology& tech) {
  BankDesign d;
  d.config = cfg;
  d.spec = variant_spec(cfg.cell_variant, tech);
  const auto& cell = gen_bitcell(d.cells, cfg.cell_variant, tech);
  d.cell_w_um = tech.to_um(cell.layout.width());
  d.cell_h_um = tech.to_um(cell.layout.height());
  d.geometry = resolve_geometry(cfg, d.cell_w_um, d.cell_h_um);
  d.t_rbl = bitline_development_time(cfg, d.spec, d.geometry.rows, d.cell_h_um, tech);
  d.top.name = bank_name(cfg);
  d.blocks.emplace("bitcell_array", build_array(d.geometry, cfg.cell_variant, d.cells, tech));
  detail::BankBuilder b{cfg, tech, d};
  if (cfg.cell_variant == CellVariant::SRAM_6T) detail::sram_top(b);
  else detail::gcram_top(b);
  for (const auto& p : detail::bus_nets("din", cfg.word_size)) d.pin_map[p] = PinRole::DATA_IN;
  for (const auto& p : detail::bus_nets("dout", cfg.word_size)) d.pin_map[p] = PinRole::DATA_OUT;
  for (const auto& p : d.top.ports)
    if (is_supply_net(p)) d.pin_map[p] = PinRole::SUPPLY;
  return d;
}

}  // namespace gcram
