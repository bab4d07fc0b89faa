// SPDX-License-Identifier: Apache-2.0
//
// Structural building blocks shared by the bank assembler: AND-tree decoder,
// sized inverter chains and delay chains. Leaf gates are registered in the
// CellLibrary; the returned subcircuits reference them by name.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gcram/logical_effort.hpp"
#include "gcram/periphery.hpp"

namespace gcram {

/// Gate width rounded to whole nanometres so generated cell names are stable.
inline double snap_width(double w_um) { return std::round(w_um * 1000.0) / 1000.0; }

/// Flat AND-tree decoder. Ports: a[0..k-1], dec[0..2^k-1], vdd, gnd.
/// Each output ANDs k literals through NAND2/NAND3 + INV levels; a single
/// literal goes through a two-inverter buffer and k = 0 ties the only output high.
inline Subckt build_decoder(int addr_bits, CellLibrary& cells, const Technology& tech) {
  if (addr_bits < 0 || addr_bits > 16) throw std::invalid_argument("decoder address bits out of range");
  double w = tech.le.unit_w;
  Subckt s;
  s.name = "decoder_" + std::to_string(addr_bits);
  int outputs = 1 << addr_bits;
  for (int i = 0; i < addr_bits; ++i) s.ports.push_back(text::bus("a", i));
  for (int j = 0; j < outputs; ++j) s.ports.push_back(text::bus("dec", j));
  s.ports.insert(s.ports.end(), {"vdd", "gnd"});
  if (addr_bits == 0) {
    s.inst("tie", gen_tie_high(cells, tech).circuit.name, {"dec[0]", "vdd", "gnd"});
    return s;
  }
  const auto inv = gen_gate(cells, GateKind::INV, w, tech).circuit.name;
  const auto nand2 = gen_gate(cells, GateKind::NAND2, w, tech).circuit.name;
  const auto nand3 = gen_gate(cells, GateKind::NAND3, w, tech).circuit.name;
  for (int i = 0; i < addr_bits; ++i)
    s.inst("comp" + std::to_string(i), inv, {text::bus("a", i), text::bus("a_b", i), "vdd", "gnd"});
  for (int j = 0; j < outputs; ++j) {
    std::string out = text::bus("dec", j);
    std::string tag = "o" + std::to_string(j);
    std::vector<std::string> sig;
    for (int i = 0; i < addr_bits; ++i) sig.push_back(text::bus((j >> i) & 1 ? "a" : "a_b", i));
    if (sig.size() == 1) {
      s.inst(tag + "_b0", inv, {sig[0], tag + "_n", "vdd", "gnd"});
      s.inst(tag + "_b1", inv, {tag + "_n", out, "vdd", "gnd"});
      continue;
    }
    for (int level = 0; sig.size() > 1; ++level) {
      std::vector<std::string> next;
      size_t pos = 0;
      for (int chunk = 0; pos < sig.size(); ++chunk) {
        size_t rem = sig.size() - pos;
        size_t take = (rem == 2 || rem == 4) ? 2 : 3;
        std::string id = tag + "_l" + std::to_string(level) + "_" + std::to_string(chunk);
        bool last = pos + take == sig.size() && next.empty();
        std::string y = last ? out : id;
        std::vector<std::string> nets(sig.begin() + static_cast<long>(pos), sig.begin() + static_cast<long>(pos + take));
        nets.push_back(id + "_n");
        nets.insert(nets.end(), {"vdd", "gnd"});
        s.inst(id + "_nand", take == 2 ? nand2 : nand3, nets);
        s.inst(id + "_inv", inv, {id + "_n", y, "vdd", "gnd"});
        next.push_back(y);
        pos += take;
      }
      sig = std::move(next);
    }
  }
  return s;
}

/// Inverter chain realizing a DriverChain. Ports: in, out, vdd, gnd.
inline Subckt build_driver_chain(const std::string& name, const DriverChain& chain, CellLibrary& cells,
                                 const Technology& tech) {
  Subckt s;
  s.name = name;
  s.ports = {"in", "out", "vdd", "gnd"};
  std::string prev = "in";
  for (int i = 0; i < chain.stages; ++i) {
    std::string next = i + 1 == chain.stages ? "out" : "x" + std::to_string(i);
    const auto& inv = gen_gate(cells, GateKind::INV, snap_width(chain.widths[i]), tech);
    s.inst("stage" + std::to_string(i), inv.circuit.name, {prev, next, "vdd", "gnd"});
    prev = next;
  }
  return s;
}

/// Even-length unit inverter chain whose modeled delay reaches `target_delay`.
/// Ports: in, out, vdd, gnd.
inline std::pair<Subckt, int> build_delay_chain(double target_delay, CellLibrary& cells, const Technology& tech) {
  int n = delay_chain_stages(target_delay, tech);
  Subckt s;
  s.name = "delay_chain_" + std::to_string(n);
  s.ports = {"in", "out", "vdd", "gnd"};
  const auto inv = gen_gate(cells, GateKind::INV, tech.le.unit_w, tech).circuit.name;
  std::string prev = "in";
  for (int i = 0; i < n; ++i) {
    std::string next = i + 1 == n ? "out" : "d" + std::to_string(i);
    s.inst("stage" + std::to_string(i), inv, {prev, next, "vdd", "gnd"});
    prev = next;
  }
  return {std::move(s), n};
}

}  // namespace gcram
