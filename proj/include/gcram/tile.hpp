// SPDX-License-Identifier: Apache-2.0
//
// Leaf-cell layout from a flat device list.
//
// Every transistor becomes one or more fingers, each drawn as a self-contained
// tile: diffusion, a gate strip crossing it, one contact with a metal1 pad on
// each side. Tiles carry a margin of half the largest spacing rule so any two
// tiles, and any two abutted cells, are spaced legally. Tiles are packed in
// rows between a ground rail (bottom) and a supply rail (top).
//
// Back-end oxide devices use the os_channel/os_gate/os_via stack with metal2
// pads and no silicon at all; a cell using them gets a single metal1/via1
// landing pad, which is what the silicon footprint measures.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcram/layout.hpp"
#include "gcram/netlist.hpp"
#include "gcram/technology.hpp"

namespace gcram {

/// Rule value in um, or `fallback` when the technology has no such rule.
inline double rule_value(const Technology& tech, RuleKind kind, std::string_view a, std::string_view b = {},
                         double fallback = 0.0) {
  for (const auto& r : tech.rules)
    if (r.kind == kind && r.layer_a == a && (b.empty() || r.layer_b == b)) return r.value;
  return fallback;
}

namespace detail {

inline int32_t even_up(int32_t v) { return v + (v & 1); }

/// Dimensions (dbu) of one device stack, derived from the rule deck.
struct StackRules {
  GdsLayer diff, gate, cut, pad;
  int32_t cut_w = 0;       // contact / via width
  int32_t pad_w = 0;       // landing pad edge
  int32_t pad_off = 0;     // pad offset from the diffusion edge
  int32_t sd = 0;          // source/drain length
  int32_t gate_l = 0;      // drawn gate length
  int32_t ext = 0;         // gate extension past the diffusion
  int32_t margin = 0;      // clearance from tile edge
  int32_t min_w = 0;       // narrowest diffusion

  int32_t diff_len() const { return 2 * sd + gate_l; }
  int32_t tile_w() const { return diff_len() + 2 * margin; }
  int32_t tile_h(int32_t w) const { return w + 2 * ext + 2 * margin; }
};

inline StackRules stack_rules(const Technology& tech, bool oxide) {
  auto dbu = [&](double um) { return static_cast<int32_t>(std::ceil(um * tech.dbu_per_um - 1e-9)); };
  std::string diff = oxide ? "os_channel" : "active";
  std::string gate = oxide ? "os_gate" : "poly";
  std::string cut = oxide ? "os_via" : "contact";
  std::string pad = oxide ? "metal2" : "metal1";
  StackRules s;
  s.diff = tech.layer(diff).gds;
  s.gate = tech.layer(gate).gds;
  s.cut = tech.layer(cut).gds;
  s.pad = tech.layer(pad).gds;
  s.cut_w = dbu(rule_value(tech, RuleKind::MIN_WIDTH, cut, {}, 0.07));
  int32_t enc = dbu(rule_value(tech, RuleKind::ENCLOSURE, pad, cut, 0.005));
  int32_t pad_area = dbu(std::sqrt(rule_value(tech, RuleKind::MIN_AREA, pad, {}, 0.0)));
  s.pad_w = even_up(std::max({s.cut_w + 2 * enc, dbu(rule_value(tech, RuleKind::MIN_WIDTH, pad, {}, 0.07)), pad_area}));
  int32_t pad_space = dbu(rule_value(tech, RuleKind::MIN_SPACING, pad, {}, 0.07));
  int32_t cut_space = dbu(rule_value(tech, RuleKind::MIN_SPACING, cut, {}, 0.09));
  s.gate_l = dbu(rule_value(tech, RuleKind::MIN_WIDTH, gate, {}, 0.05));
  s.ext = dbu(rule_value(tech, RuleKind::EXTENSION, gate, diff, 0.07));
  s.pad_off = 15;
  // contact-to-gate clearance of 20 dbu, then widen until pads and cuts clear each other across the gate
  s.sd = s.pad_off + (s.pad_w - s.cut_w) / 2 + s.cut_w + 20;
  while (2 * s.sd + s.gate_l - 2 * (s.pad_off + s.pad_w) < pad_space ||
         2 * s.sd + s.gate_l - 2 * (s.pad_off + (s.pad_w - s.cut_w) / 2 + s.cut_w) < cut_space)
    s.sd += 5;
  int32_t widest = 0;
  for (const auto& l : {diff, gate, cut, pad})
    widest = std::max(widest, dbu(rule_value(tech, RuleKind::MIN_SPACING, l, {}, 0.0)));
  s.margin = even_up(widest) / 2;
  s.min_w = std::max(dbu(rule_value(tech, RuleKind::MIN_WIDTH, diff, {}, 0.0)), s.pad_w);
  double diff_area = rule_value(tech, RuleKind::MIN_AREA, diff, {}, 0.0) * tech.dbu_per_um * tech.dbu_per_um;
  s.min_w = std::max(s.min_w, static_cast<int32_t>(std::ceil(diff_area / s.diff_len())));
  return s;
}

struct PinSite {
  std::string net;
  GdsLayer layer;
  Rect rect;  // tile-local
};

struct Tile {
  int32_t w = 0, h = 0;
  std::vector<Shape> shapes;    // tile-local
  std::vector<PinSite> sites;   // candidate pin locations
  bool well = false;            // needs an nwell under the whole tile
};

/// One finger of width `w` dbu: sites are (drain pad, gate, source pad).
inline Tile mos_tile(const StackRules& s, int32_t w, const std::string& d, const std::string& g,
                     const std::string& src) {
  w = std::max(w, s.min_w);
  Tile t;
  t.w = s.tile_w();
  t.h = s.tile_h(w);
  int32_t x0 = s.margin, y0 = s.margin + s.ext;
  Rect diff{x0, y0, x0 + s.diff_len(), y0 + w};
  Rect gate{x0 + s.sd, y0 - s.ext, x0 + s.sd + s.gate_l, y0 + w + s.ext};
  int32_t py = y0 + (w - s.pad_w) / 2;
  Rect pad_l{x0 + s.pad_off, py, x0 + s.pad_off + s.pad_w, py + s.pad_w};
  Rect pad_r{x0 + s.diff_len() - s.pad_off - s.pad_w, py, x0 + s.diff_len() - s.pad_off, py + s.pad_w};
  int32_t e = (s.pad_w - s.cut_w) / 2;
  t.shapes = {{s.diff, diff}, {s.gate, gate}, {s.pad, pad_l}, {s.pad, pad_r},
              {s.cut, {pad_l.x0 + e, pad_l.y0 + e, pad_l.x1 - e, pad_l.y1 - e}},
              {s.cut, {pad_r.x0 + e, pad_r.y0 + e, pad_r.x1 - e, pad_r.y1 - e}}};
  t.sites = {{d, s.pad, pad_l}, {g, s.gate, {gate.x0, diff.y1, gate.x1, gate.y1}}, {src, s.pad, pad_r}};
  return t;
}

/// Resistor drawn as a gate-layer strip; sites at both ends.
inline Tile res_tile(const Technology& tech, const std::string& a, const std::string& b) {
  auto s = stack_rules(tech, false);
  Tile t;
  t.w = s.gate_l + 2 * s.margin;
  t.h = 600 + 2 * s.margin;
  Rect strip{s.margin, s.margin, s.margin + s.gate_l, s.margin + 600};
  t.shapes = {{s.gate, strip}};
  t.sites = {{a, s.gate, {strip.x0, strip.y1 - 100, strip.x1, strip.y1}},
             {b, s.gate, {strip.x0, strip.y0, strip.x1, strip.y0 + 100}}};
  return t;
}

/// Bare metal1 pad for a port no device terminal can carry.
inline Tile pad_tile(const Technology& tech, const std::string& net) {
  auto s = stack_rules(tech, false);
  int32_t side = std::max(s.pad_w, 100);
  Tile t;
  t.w = t.h = side + 2 * s.margin;
  Rect pad{s.margin, s.margin, s.margin + side, s.margin + side};
  t.shapes = {{s.pad, pad}};
  t.sites = {{net, s.pad, pad}};
  return t;
}

/// metal1 / via1 / metal2 stack: the only silicon-level shape of an oxide cell.
inline Tile landing_tile(const Technology& tech, const std::string& net) {
  auto s = stack_rules(tech, false);
  auto dbu = [&](double um) { return static_cast<int32_t>(std::ceil(um * tech.dbu_per_um - 1e-9)); };
  int32_t via = dbu(rule_value(tech, RuleKind::MIN_WIDTH, "via1", {}, 0.07));
  int32_t enc = std::max(dbu(rule_value(tech, RuleKind::ENCLOSURE, "metal1", "via1", 0.005)),
                         dbu(rule_value(tech, RuleKind::ENCLOSURE, "metal2", "via1", 0.005)));
  int32_t side = even_up(std::max(via + 2 * enc, s.pad_w));
  int32_t m = s.margin;
  Tile t;
  t.w = t.h = side + 2 * m;
  Rect pad{m, m, m + side, m + side};
  int32_t e = (side - via) / 2;
  t.shapes = {{tech.layer("metal1").gds, pad},
              {tech.layer("via1").gds, {pad.x0 + e, pad.y0 + e, pad.x1 - e, pad.y1 - e}},
              {tech.layer("metal2").gds, pad}};
  t.sites = {{net, tech.layer("metal2").gds, pad}};
  return t;
}

}  // namespace detail

struct LeafStyle {
  bool rails = true;                 ///< draw supply rails
  std::string rail_layer = "metal1";
  std::optional<double> finger_max;  ///< um; wider devices are split into fingers
  bool landing_pad = false;          ///< add the silicon landing pad (oxide cells)
};

/// Builds the layout of a leaf cell from its flat device list. Ports that are
/// supplies get their rail as pin; other ports take the first free terminal site
/// of a device on that net, falling back to a dedicated pad.
inline LayoutCell build_leaf_layout(const Subckt& flat, const Technology& tech, const LeafStyle& style = {}) {
  using namespace detail;
  std::vector<Tile> tiles;
  double finger = style.finger_max.value_or(2.0);
  for (const auto& d : flat.devices) {
    if (d.kind == DeviceKind::RES) {
      tiles.push_back(res_tile(tech, d.terminals[0], d.terminals[1]));
      continue;
    }
    if (d.kind != DeviceKind::MOS) continue;
    const auto& model = tech.device(d.model);
    bool oxide = model.channel == Channel::NMOS_OS;
    auto rules = stack_rules(tech, oxide);
    int fingers = std::max(1, static_cast<int>(std::ceil(d.w / finger - 1e-9)));
    int32_t fw = static_cast<int32_t>(std::ceil(d.w / fingers * tech.dbu_per_um - 1e-9));
    for (int f = 0; f < fingers; ++f) {
      auto t = mos_tile(rules, fw, d.terminals[0], d.terminals[1], d.terminals[2]);
      t.well = model.is_pmos();
      tiles.push_back(std::move(t));
    }
  }
  bool uses_vdd = flat.has_port("vdd"), uses_gnd = flat.has_port("gnd");
  bool rails = style.rails;
  std::map<std::string, std::pair<size_t, size_t>> assigned;  // port -> (tile, site)
  std::set<std::pair<size_t, size_t>> taken;
  for (const auto& p : flat.ports) {
    if (rails && ((p == "vdd" && uses_vdd) || (p == "gnd" && uses_gnd))) continue;
    bool found = false;
    for (size_t ti = 0; ti < tiles.size() && !found; ++ti)
      for (size_t si = 0; si < tiles[ti].sites.size() && !found; ++si)
        if (tiles[ti].sites[si].net == p && !taken.count({ti, si})) {
          assigned[p] = {ti, si};
          taken.insert({ti, si});
          found = true;
        }
    if (!found) {
      tiles.push_back(pad_tile(tech, p));
      assigned[p] = {tiles.size() - 1, 0};
      taken.insert({tiles.size() - 1, 0});
    }
  }
  if (style.landing_pad) tiles.push_back(landing_tile(tech, "gnd"));

  const int32_t rail_w = 100;
  int32_t bottom = rails && uses_gnd ? rail_w : 0;
  int32_t top = rails && uses_vdd ? rail_w : 0;
  // row count giving the squarest outline; ties keep fewer rows
  size_t n = tiles.size();
  size_t best_rows = 1;
  int64_t best_skew = -1;
  for (size_t r = 1; r <= std::max<size_t>(n, 1); ++r) {
    size_t per = (n + r - 1) / r;
    int64_t w = 0, h = bottom + top;
    for (size_t row = 0; row * per < n; ++row) {
      int64_t rw = 0, rh = 0;
      for (size_t k = row * per; k < std::min(n, (row + 1) * per); ++k) {
        rw += tiles[k].w;
        rh = std::max<int64_t>(rh, tiles[k].h);
      }
      w = std::max(w, rw);
      h += rh;
    }
    int64_t skew = std::llabs(w - h);
    if (best_skew < 0 || skew < best_skew) best_skew = skew, best_rows = r;
  }
  LayoutCell cell;
  cell.name = flat.name;
  size_t per = n == 0 ? 1 : (n + best_rows - 1) / best_rows;
  int32_t y = bottom, width = 0;
  std::vector<std::pair<int32_t, int32_t>> origin(n);
  for (size_t row = 0; row * per < n; ++row) {
    int32_t x = 0, rh = 0;
    for (size_t k = row * per; k < std::min(n, (row + 1) * per); ++k) {
      origin[k] = {x, y};
      x += tiles[k].w;
      rh = std::max(rh, tiles[k].h);
    }
    width = std::max(width, x);
    y += rh;
  }
  width = std::max(width, 2 * rail_w);
  int32_t height = y + top;
  for (size_t k = 0; k < n; ++k) {
    auto [ox, oy] = origin[k];
    for (const auto& s : tiles[k].shapes) cell.add(s.layer, s.rect.translated(ox, oy));
    if (tiles[k].well)
      cell.add(tech.layer("nwell").gds, Rect{0, 0, tiles[k].w, tiles[k].h}.translated(ox, oy));
  }
  GdsLayer rail_layer = tech.layer(style.rail_layer).gds;
  if (bottom) {
    cell.add(rail_layer, {0, 0, width, rail_w});
    cell.add_pin("gnd", rail_layer, {0, 0, width, rail_w});
  }
  if (top) {
    cell.add(rail_layer, {0, height - rail_w, width, height});
    cell.add_pin("vdd", rail_layer, {0, height - rail_w, width, height});
  }
  for (const auto& p : flat.ports) {
    auto it = assigned.find(p);
    if (it == assigned.end()) continue;
    auto [ti, si] = it->second;
    const auto& site = tiles[ti].sites[si];
    cell.add_pin(p, site.layer, site.rect.translated(origin[ti].first, origin[ti].second));
  }
  cell.boundary = {0, 0, width, std::max(height, 1)};
  return cell;
}

/// Silicon area used by a cell: bounding box of shapes on the technology's
/// footprint layers, grown by half a spacing margin and clipped to the boundary.
inline Rect silicon_footprint(const LayoutCell& cell, const LayoutLibrary& lib, const Technology& tech) {
  std::set<GdsLayer> layers;
  for (auto name : text::split_ws(tech.params.footprint_layers))
    if (const auto* l = tech.find_layer(name)) layers.insert(l->gds);
  Rect box;
  for (const auto& s : flatten_shapes(cell, lib, false))
    if (layers.count(s.layer)) box = box.united(s.rect);
  if (box.empty()) return {};
  return box.expanded(detail::stack_rules(tech, false).margin).intersected(cell.boundary);
}

}  // namespace gcram
