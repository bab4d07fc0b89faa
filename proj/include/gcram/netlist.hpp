// SPDX-License-Identifier: Apache-2.0
//
// Hierarchical circuit IR: subcircuits, devices and instances, with SPICE
// emission, flattening, structural connectivity checks and a switch-level
// evaluator used to verify generated logic.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gcram/text.hpp"

namespace gcram {

enum class DeviceKind { MOS, CAP, RES };

struct Device {
  std::string name;
  DeviceKind kind = DeviceKind::MOS;
  std::vector<std::string> terminals;  ///< MOS: d g s b; CAP/RES: a b
  std::string model;
  double w = 0;      ///< um
  double l = 0;      ///< um
  double value = 0;  ///< farads or ohms

  bool operator==(const Device&) const = default;
};

struct Instance {
  std::string name;
  std::string subckt;
  std::vector<std::string> connections;

  bool operator==(const Instance&) const = default;
};

struct Subckt {
  std::string name;
  std::vector<std::string> ports;
  std::vector<Device> devices;
  std::vector<Instance> instances;

  bool has_port(std::string_view n) const { return std::find(ports.begin(), ports.end(), n) != ports.end(); }

  /// Nets referenced by devices or instances that are not ports, sorted.
  std::set<std::string> internal_nets() const {
    std::set<std::string> nets;
    for (const auto& d : devices) nets.insert(d.terminals.begin(), d.terminals.end());
    for (const auto& i : instances) nets.insert(i.connections.begin(), i.connections.end());
    for (const auto& p : ports) nets.erase(p);
    return nets;
  }

  Device& mos(std::string name, std::string d, std::string g, std::string s, std::string b, std::string model,
              double w, double l) {
    devices.push_back({std::move(name), DeviceKind::MOS, {std::move(d), std::move(g), std::move(s), std::move(b)},
                       std::move(model), w, l, 0.0});
    return devices.back();
  }
  Device& passive(DeviceKind kind, std::string name, std::string a, std::string b, double value) {
    devices.push_back({std::move(name), kind, {std::move(a), std::move(b)}, {}, 0.0, 0.0, value});
    return devices.back();
  }
  Instance& inst(std::string name, std::string subckt, std::vector<std::string> nets) {
    instances.push_back({std::move(name), std::move(subckt), std::move(nets)});
    return instances.back();
  }

  bool operator==(const Subckt&) const = default;
};

/// Named subcircuit definitions.
using CircuitLibrary = std::map<std::string, Subckt>;

class NetlistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_supply_net(std::string_view n) { return n == "vdd" || n == "gnd" || n == "vwwl"; }

inline std::string canonical_net(std::string_view n) { return text::lower(n); }

namespace detail {

inline const Subckt& resolve(const CircuitLibrary& lib, const std::string& name, const std::string& from) {
  auto it = lib.find(name);
  if (it == lib.end()) throw NetlistError("unresolved subcircuit '" + name + "' referenced from '" + from + "'");
  return it->second;
}

inline void topo_visit(const Subckt& s, const CircuitLibrary& lib, std::map<std::string, int>& state,
                       std::vector<const Subckt*>& out) {
  state[s.name] = 1;
  for (const auto& inst : s.instances) {
    const auto& child = resolve(lib, inst.subckt, s.name);
    if (inst.connections.size() != child.ports.size())
      throw NetlistError("instance '" + inst.name + "' in '" + s.name + "' connects " +
                         std::to_string(inst.connections.size()) + " nets to '" + child.name + "' with " +
                         std::to_string(child.ports.size()) + " ports");
    auto st = state[child.name];
    if (st == 1) throw NetlistError("hierarchy cycle through '" + child.name + "'");
    if (st == 0) topo_visit(child, lib, state, out);
  }
  state[s.name] = 2;
  out.push_back(&s);
}

}  // namespace detail

/// Reachable subcircuits, leaves first, top last. Order follows instance order.
inline std::vector<const Subckt*> topological_order(const Subckt& top, const CircuitLibrary& lib) {
  std::map<std::string, int> state;
  std::vector<const Subckt*> out;
  detail::topo_visit(top, lib, state, out);
  return out;
}

inline std::string emit_subckt(const Subckt& s) {
  std::string out = ".SUBCKT " + s.name;
  for (const auto& p : s.ports) out += " " + p;
  out += "\n";
  for (const auto& d : s.devices) {
    switch (d.kind) {
      case DeviceKind::MOS:
        if (d.terminals.size() != 4) throw NetlistError("MOS '" + d.name + "' needs 4 terminals");
        out += "M" + d.name;
        for (const auto& t : d.terminals) out += " " + t;
        out += " " + d.model + " W=" + text::num(d.w) + "u L=" + text::num(d.l) + "u\n";
        break;
      case DeviceKind::CAP:
      case DeviceKind::RES:
        out += (d.kind == DeviceKind::CAP ? "C" : "R") + d.name;
        for (const auto& t : d.terminals) out += " " + t;
        out += " " + text::num(d.value) + "\n";
        break;
    }
  }
  for (const auto& i : s.instances) {
    out += "X" + i.name;
    for (const auto& n : i.connections) out += " " + n;
    out += " " + i.subckt + "\n";
  }
  out += ".ENDS " + s.name + "\n";
  return out;
}

/// Deterministic SPICE text: every reachable subcircuit once, leaves first.
inline std::string emit_spice(const Subckt& top, const CircuitLibrary& lib) {
  std::string out = "* netlist " + top.name + "\n";
  for (const auto* s : topological_order(top, lib)) out += emit_subckt(*s);
  return out;
}

/// Devices in the expanded hierarchy, counted without building the flat netlist.
inline long long count_devices(const Subckt& top, const CircuitLibrary& lib) {
  std::map<std::string, long long> memo;
  for (const auto* s : topological_order(top, lib)) {
    long long n = static_cast<long long>(s->devices.size());
    for (const auto& i : s->instances) n += memo.at(i.subckt);
    memo[s->name] = n;
  }
  return memo.at(top.name);
}

namespace detail {

inline void flatten_into(const Subckt& s, const CircuitLibrary& lib, const std::string& prefix,
                         const std::map<std::string, std::string>& port_map, Subckt& flat, int depth) {
  if (depth > 256) throw NetlistError("hierarchy too deep (cycle?) at '" + s.name + "'");
  auto net = [&](const std::string& n) {
    auto it = port_map.find(n);
    return it != port_map.end() ? it->second : prefix + n;
  };
  for (const auto& d : s.devices) {
    Device copy = d;
    copy.name = prefix + d.name;
    for (auto& t : copy.terminals) t = net(t);
    flat.devices.push_back(std::move(copy));
  }
  for (const auto& inst : s.instances) {
    const auto& child = resolve(lib, inst.subckt, s.name);
    if (inst.connections.size() != child.ports.size())
      throw NetlistError("instance '" + inst.name + "' arity mismatch");
    std::map<std::string, std::string> child_map;
    for (size_t k = 0; k < child.ports.size(); ++k) child_map[child.ports[k]] = net(inst.connections[k]);
    flatten_into(child, lib, prefix + inst.name + ".", child_map, flat, depth + 1);
  }
}

}  // namespace detail

/// Expands every instance; internal nets become `inst.net`, top ports keep their names.
inline Subckt flatten(const Subckt& top, const CircuitLibrary& lib) {
  topological_order(top, lib);  // cycle and reference check
  Subckt flat;
  flat.name = top.name + "_flat";
  flat.ports = top.ports;
  std::map<std::string, std::string> ports;
  for (const auto& p : top.ports) ports[p] = p;
  detail::flatten_into(top, lib, "", ports, flat, 0);
  return flat;
}

// ---------------------------------------------------------------------------
// Connectivity checks

enum class FindingKind { FLOATING_NET, UNDRIVEN_GATE, UNREACHABLE_SUPPLY, SHORTED_PORTS };

inline std::string_view to_string(FindingKind k) {
  switch (k) {
    case FindingKind::FLOATING_NET: return "floating_net";
    case FindingKind::UNDRIVEN_GATE: return "undriven_gate";
    case FindingKind::UNREACHABLE_SUPPLY: return "unreachable_supply";
    case FindingKind::SHORTED_PORTS: return "shorted_ports";
  }
  return "?";
}

struct Finding {
  FindingKind kind;
  std::string subckt;
  std::string net;
  std::string message;
  auto operator<=>(const Finding&) const = default;
};

/// Structural checks over every reachable subcircuit:
///  - floating net: internal net with nothing able to set its voltage and no gate load
///  - undriven gate: a gate (directly or through a child's input port) on an undriven internal net
///  - unreachable supply: supply net used inside a subcircuit without being one of its ports
///  - shorted ports: one net tied to two ports of the same instance
/// Ports of the subcircuit under inspection count as driven.
inline std::vector<Finding> connectivity_check(const Subckt& top, const CircuitLibrary& lib) {
  std::vector<Finding> findings;
  std::map<std::string, std::set<std::string>> driving_ports, gate_ports;
  for (const auto* s : topological_order(top, lib)) {
    std::map<std::string, bool> driven, gated;
    auto touch = [&](const std::string& n) {
      driven.try_emplace(n, false);
      gated.try_emplace(n, false);
    };
    for (const auto& d : s->devices) {
      for (size_t k = 0; k < d.terminals.size(); ++k) {
        const auto& n = d.terminals[k];
        touch(n);
        if (d.kind != DeviceKind::MOS) driven[n] = true;
        else if (k == 0 || k == 2) driven[n] = true;
        else if (k == 1) gated[n] = true;
      }
    }
    for (const auto& inst : s->instances) {
      const auto& child = lib.at(inst.subckt);
      const auto& dp = driving_ports[child.name];
      const auto& gp = gate_ports[child.name];
      std::map<std::string, int> seen;
      for (size_t k = 0; k < inst.connections.size(); ++k) {
        const auto& n = inst.connections[k];
        touch(n);
        if (dp.count(child.ports[k])) driven[n] = true;
        if (gp.count(child.ports[k])) gated[n] = true;
        if (seen[n]++ == 1)
          findings.push_back({FindingKind::SHORTED_PORTS, s->name, n,
                              "net '" + n + "' shorts ports of instance '" + inst.name + "'"});
      }
    }
    auto& my_drive = driving_ports[s->name];
    auto& my_gate = gate_ports[s->name];
    for (const auto& p : s->ports) {
      touch(p);
      if (driven[p]) my_drive.insert(p);
      if (gated[p]) my_gate.insert(p);
    }
    for (const auto& [n, is_driven] : driven) {
      if (s->has_port(n)) continue;
      if (is_supply_net(n)) {
        findings.push_back({FindingKind::UNREACHABLE_SUPPLY, s->name, n,
                            "supply '" + n + "' used in '" + s->name + "' is not a port"});
        continue;
      }
      if (is_driven) continue;
      if (gated[n])
        findings.push_back({FindingKind::UNDRIVEN_GATE, s->name, n, "gate net '" + n + "' has no driver"});
      else
        findings.push_back({FindingKind::FLOATING_NET, s->name, n, "net '" + n + "' is floating"});
    }
  }
  std::sort(findings.begin(), findings.end());
  return findings;
}

// ---------------------------------------------------------------------------
// Switch-level evaluation

/// Evaluates a flat netlist at switch level. NMOS conducts on gate 1, PMOS on gate 0;
/// resistors conduct; capacitors never do. A conducting group takes the value of
/// its driven members when they agree and stays unknown otherwise.
class SwitchSim {
 public:
  using IsPmos = std::function<bool(const std::string& model)>;

  SwitchSim(const Subckt& flat, IsPmos is_pmos) : flat_(flat) {
    for (const auto& d : flat.devices)
      for (const auto& t : d.terminals) id(t);
    for (const auto& d : flat.devices) pmos_.push_back(d.kind == DeviceKind::MOS && is_pmos(d.model));
  }

  /// Net values after settling. Supplies: vdd/vwwl = 1, gnd = 0.
  std::map<std::string, std::optional<bool>> evaluate(const std::map<std::string, bool>& inputs) const {
    size_t n = names_.size();
    std::vector<int> fixed(n, -1);
    for (size_t i = 0; i < n; ++i) {
      if (names_[i] == "vdd" || names_[i] == "vwwl") fixed[i] = 1;
      if (names_[i] == "gnd") fixed[i] = 0;
    }
    for (const auto& [net, v] : inputs) {
      auto it = index_.find(net);
      if (it != index_.end()) fixed[it->second] = v ? 1 : 0;
    }
    std::vector<int> value = fixed;
    for (int iter = 0; iter < 4 * static_cast<int>(n) + 8; ++iter) {
      std::vector<int> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
      for (size_t k = 0; k < flat_.devices.size(); ++k) {
        const auto& d = flat_.devices[k];
        int a = -1, b = -1;
        if (d.kind == DeviceKind::MOS) {
          int g = value[index_.at(d.terminals[1])];
          bool on = pmos_[k] ? g == 0 : g == 1;
          if (!on) continue;
          a = index_.at(d.terminals[0]);
          b = index_.at(d.terminals[2]);
        } else if (d.kind == DeviceKind::RES) {
          a = index_.at(d.terminals[0]);
          b = index_.at(d.terminals[1]);
        } else {
          continue;
        }
        parent[find(a)] = find(b);
      }
      // 0: none, 1: saw 0, 2: saw 1, 3: conflict
      std::vector<int> seen(n, 0);
      for (size_t i = 0; i < n; ++i)
        if (fixed[i] >= 0) seen[find(static_cast<int>(i))] |= fixed[i] ? 2 : 1;
      std::vector<int> next(n, -1);
      for (size_t i = 0; i < n; ++i) {
        if (fixed[i] >= 0) {
          next[i] = fixed[i];
          continue;
        }
        int s = seen[find(static_cast<int>(i))];
        next[i] = s == 1 ? 0 : s == 2 ? 1 : -1;
      }
      if (next == value) break;
      value = std::move(next);
    }
    std::map<std::string, std::optional<bool>> out;
    for (size_t i = 0; i < n; ++i)
      out[names_[i]] = value[i] < 0 ? std::nullopt : std::optional<bool>(value[i] == 1);
    return out;
  }

  /// True when some conducting path joins nets a and b under the given inputs.
  bool connected(const std::map<std::string, bool>& inputs, const std::string& a, const std::string& b) const {
    auto values = evaluate(inputs);
    size_t n = names_.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (size_t k = 0; k < flat_.devices.size(); ++k) {
      const auto& d = flat_.devices[k];
      if (d.kind == DeviceKind::CAP) continue;
      if (d.kind == DeviceKind::MOS) {
        auto g = values.at(d.terminals[1]);
        if (!g || (pmos_[k] ? *g : !*g)) continue;
      }
      int x = index_.at(d.terminals[0]);
      int y = index_.at(d.terminals[d.kind == DeviceKind::MOS ? 2 : 1]);
      parent[find(x)] = find(y);
    }
    auto ia = index_.find(a), ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end()) return false;
    return find(ia->second) == find(ib->second);
  }

 private:
  int id(const std::string& n) {
    auto [it, inserted] = index_.try_emplace(n, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(n);
    return it->second;
  }

  const Subckt& flat_;
  std::vector<bool> pmos_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace gcram
