// SPDX-License-Identifier: Apache-2.0
//
// Bank floorplan: the bitcell array by abutment, periphery blocks by shelf
// packing, a 3x3 grid around the array with routing channels between
// neighbours, and supply rings around the core.
//
// Channel routing is greedy left-edge: one track per net, horizontal segments
// on metal3, vertical segments on metal2, via2 at every bend. Pins on left and
// right block edges are metal3, on top and bottom edges metal2.

#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcram/bankgen.hpp"
#include "gcram/layout.hpp"

namespace gcram {

struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Floorplan constants, dbu. Chosen for the generic45 metal rules (70 nm width/space).
struct FloorplanRules {
  int32_t pack_gap = 140;       ///< between packed cells and shelves
  int32_t frame = 300;          ///< pin frame around every block core
  int32_t pin_w = 80;           ///< pin and wire width
  int32_t pin_depth = 120;      ///< pin extent into the frame
  int32_t pitch = 160;          ///< pin slot and track pitch
  int32_t slot_offset = 500;    ///< first slot from the aligned block edge
  int32_t channel_margin = 200; ///< channel edge to first track centre
  int32_t straight_channel = 400;
  int32_t via = 70;
  int32_t ring_gap = 600;       ///< core to first ring
  int32_t ring_w = 600;
  int32_t ring_space = 300;
  int32_t die_margin = 300;     ///< outer ring to die boundary
  int max_tracks = 256;
};

namespace detail {

inline const LayoutCell& leaf_or_packed(const std::string& name, const BankDesign& d, LayoutLibrary& out,
                                        const FloorplanRules& fr, int64_t target_width, int64_t target_height = 0);

/// Shelf-packs the instances of composite `s` in instance order. With a target height the
/// shelves are columns and composite children are packed to the same height; otherwise
/// shelves are rows of `target_width` (a square when <= 0).
inline LayoutCell shelf_pack(const Subckt& s, const BankDesign& d, LayoutLibrary& out, const FloorplanRules& fr,
                             int64_t target_width, int64_t target_height = 0) {
  bool columns = target_height > 0;
  std::vector<const LayoutCell*> kids;
  double area = 0;
  int64_t longest = 0;
  for (const auto& inst : s.instances) {
    const auto& c = columns ? leaf_or_packed(inst.subckt, d, out, fr, 0, target_height)
                            : leaf_or_packed(inst.subckt, d, out, fr, target_width > 0 ? target_width : 0);
    kids.push_back(&c);
    area += static_cast<double>(c.width() + fr.pack_gap) * static_cast<double>(c.height() + fr.pack_gap);
    longest = std::max(longest, columns ? c.height() : c.width());
  }
  int64_t limit = columns ? target_height
                          : target_width > 0 ? target_width : static_cast<int64_t>(std::ceil(std::sqrt(area)));
  limit = std::max(limit, longest);
  LayoutCell cell;
  cell.name = s.name;
  // next-fit decreasing depth; u runs along a shelf, v across shelves.
  // Placements stay in instance order.
  auto depth_of = [&](const LayoutCell* c) { return columns ? c->width() : c->height(); };
  std::vector<size_t> order(kids.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return depth_of(kids[a]) > depth_of(kids[b]); });
  std::vector<std::pair<int64_t, int64_t>> pos(kids.size());
  int64_t u = 0, v = 0, depth = 0, max_u = 0;
  for (size_t i : order) {
    const auto* c = kids[i];
    int64_t cu = columns ? c->height() : c->width();
    if (u > 0 && u + cu > limit) {
      v += depth + fr.pack_gap;
      u = 0;
      depth = 0;
    }
    pos[i] = {columns ? v : u, columns ? u : v};
    max_u = std::max(max_u, u + cu);
    depth = std::max(depth, depth_of(c));
    u += cu + fr.pack_gap;
  }
  for (size_t i = 0; i < kids.size(); ++i) {
    const auto* c = kids[i];
    cell.place(c->name, static_cast<int32_t>(pos[i].first - c->boundary.x0),
               static_cast<int32_t>(pos[i].second - c->boundary.y0));
  }
  int64_t w = columns ? v + depth : max_u, h = columns ? max_u : v + depth;
  cell.boundary = {0, 0, static_cast<int32_t>(std::max<int64_t>(w, 1)), static_cast<int32_t>(std::max<int64_t>(h, 1))};
  return cell;
}

inline const LayoutCell& leaf_or_packed(const std::string& name, const BankDesign& d, LayoutLibrary& out,
                                        const FloorplanRules& fr, int64_t target_width, int64_t target_height) {
  if (auto it = out.find(name); it != out.end()) return it->second;
  if (d.cells.contains(name)) return out.emplace(name, d.cells.at(name).layout).first->second;
  const auto& s = d.blocks.at(name);
  auto cell = shelf_pack(s, d, out, fr, target_width, target_height);
  if (target_height > 0) {
    // inside a column: a single strip or a square often wastes less than a full-height column
    auto cost = [&](const LayoutCell& c) {
      return static_cast<double>(c.width() + fr.pack_gap) * static_cast<double>(c.height() + fr.pack_gap);
    };
    for (int64_t tw : {int64_t{0}, int64_t{1} << 40}) {
      auto alt = shelf_pack(s, d, out, fr, tw);
      if (alt.height() <= target_height && 4 * alt.width() <= target_height && cost(alt) < cost(cell))
        cell = std::move(alt);
    }
  }
  return out.emplace(name, std::move(cell)).first->second;
}

}  // namespace detail

/// Array of abutted bitcells, odd rows mirrored about x so neighbouring rows share rails.
/// The boundary adds a pin frame; pins sit in the frame facing their periphery block.
/// Grid origin is (0, 0); the frame extends to negative coordinates.
inline LayoutCell array_layout(const BankDesign& d, const Technology& tech, const FloorplanRules& fr = {}) {
  const auto& g = d.geometry;
  const auto& bit = d.cells.at(bitcell_name(d.config.cell_variant)).layout;
  const auto& b = bit.boundary;
  int32_t cw = static_cast<int32_t>(b.width()), ch = static_cast<int32_t>(b.height());
  LayoutCell a;
  a.name = "bitcell_array";
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) {
      int32_t dx = c * cw - b.x0;
      if (r % 2 == 0) a.place(bit.name, dx, r * ch - b.y0);
      else a.place(bit.name, dx, r * ch + b.y1, Orientation::MX);
    }
  int32_t w = g.cols * cw, h = g.rows * ch, f = fr.frame;
  a.boundary = {-f, -f, w + f, h + f};
  auto m2 = tech.layer("metal2").gds, m3 = tech.layer("metal3").gds;
  int32_t hw = fr.pin_w / 2;
  auto left = [&](const std::string& n, int32_t y) { a.add_pin(n, m3, {-f, y - hw, -f + fr.pin_depth, y + hw}); };
  auto right = [&](const std::string& n, int32_t y) { a.add_pin(n, m3, {w + f - fr.pin_depth, y - hw, w + f, y + hw}); };
  auto bottom = [&](const std::string& n, int32_t x) { a.add_pin(n, m2, {x - hw, -f, x + hw, -f + fr.pin_depth}); };
  auto top = [&](const std::string& n, int32_t x) { a.add_pin(n, m2, {x - hw, h + f - fr.pin_depth, x + hw, h + f}); };
  bool sram = d.config.cell_variant == CellVariant::SRAM_6T;
  for (int r = 0; r < g.rows; ++r) {
    int32_t y = r * ch + ch / 2;
    if (sram) {
      left(text::bus("wl", r), y);
    } else {
      left(text::bus("wwl", r), y);
      right(text::bus("rwl", r), y);
    }
  }
  for (int c = 0; c < g.cols; ++c) {
    if (sram) {
      bottom(text::bus("bl", c), c * cw + cw / 4);
      bottom(text::bus("bl_b", c), c * cw + 3 * cw / 4);
    } else {
      bottom(text::bus("wbl", c), c * cw + cw / 2);
      top(text::bus("rbl", c), c * cw + cw / 2);
    }
  }
  return a;
}

enum class Side { LEFT, RIGHT, BOTTOM, TOP };

namespace detail {

/// Pins on TOP/BOTTOM edges run along x.
inline bool along_x(Side s) { return s == Side::BOTTOM || s == Side::TOP; }

struct BlockPin {
  std::string net;
  Side side = Side::LEFT;
  int slot = -1;      ///< -1: aligned to an array pin
  int64_t along = 0;  ///< local coordinate along the edge
};

struct FloorBlock {
  std::string inst;
  std::string cell;
  int col = 1, row = 1;
  const LayoutCell* core = nullptr;
  int64_t w = 0, h = 0;
  int64_t core_x = 0, core_y = 0;
  int64_t x0 = 0, y0 = 0;
  std::vector<BlockPin> pins;
  std::map<Side, int> slots_used;  ///< highest slot + 1 per side
};

/// Slot numbering on a side starts at the edge the block is aligned to in its grid cell:
/// column 0 blocks hug their right edge, row 0 blocks their top edge.
inline bool slots_from_high(Side s, int col, int row) { return along_x(s) ? col == 0 : row == 0; }

inline Side facing(int dc, int dr) {
  if (dc > 0) return Side::RIGHT;
  if (dc < 0) return Side::LEFT;
  return dr > 0 ? Side::TOP : Side::BOTTOM;
}

inline Side outer_side(int col, int row) {
  if (col == 0) return Side::LEFT;
  if (col == 2) return Side::RIGHT;
  return row == 0 ? Side::BOTTOM : Side::TOP;
}

/// Centre of the first child connected to `port`, in core coordinates, along the side's axis.
inline int64_t port_anchor(const Subckt& s, const LayoutCell& core, const LayoutLibrary& lib, const std::string& port,
                           bool x_axis) {
  for (size_t i = 0; i < s.instances.size() && i < core.placements.size(); ++i) {
    const auto& conn = s.instances[i].connections;
    if (std::find(conn.begin(), conn.end(), port) == conn.end()) continue;
    const auto& pl = core.placements[i];
    auto r = transform(lib.at(pl.cell).boundary, pl.orient, pl.dx, pl.dy);
    return x_axis ? (int64_t{r.x0} + r.x1) / 2 : (int64_t{r.y0} + r.y1) / 2;
  }
  return x_axis ? core.boundary.width() / 2 : core.boundary.height() / 2;
}

/// Slot request for one pin: desired slot index from the connected child's position.
struct SlotRequest {
  FloorBlock* block;
  std::string net;
  Side side;
  int desired;
};

/// Gives every request a slot; a slot holds one net, shared by both sides of a channel.
inline void assign_slots(std::vector<SlotRequest> reqs) {
  std::stable_sort(reqs.begin(), reqs.end(), [](const SlotRequest& a, const SlotRequest& b) {
    return a.desired != b.desired ? a.desired < b.desired : a.net < b.net;
  });
  std::map<int, std::string> owner;
  for (auto& r : reqs) {
    int k = -1;
    for (int step = 0;; ++step) {
      for (int cand : {r.desired + step, r.desired - step}) {
        if (cand < 0) continue;
        auto it = owner.find(cand);
        if (it == owner.end() || it->second == r.net) {
          k = cand;
          break;
        }
      }
      if (k >= 0) break;
    }
    owner[k] = r.net;
    r.block->pins.push_back({r.net, r.side, k, 0});
    auto& used = r.block->slots_used[r.side];
    used = std::max(used, k + 1);
  }
}

}  // namespace detail

namespace detail {

/// Greedy left-edge track assignment over integer slot intervals. Returns net -> track, -1 when the
/// net's pins share a single slot and need no track.
inline std::map<std::string, int> left_edge(const std::map<std::string, std::pair<int, int>>& spans, int max_tracks,
                                            const std::string& channel) {
  std::vector<std::pair<std::pair<int, int>, std::string>> order;
  for (const auto& [net, span] : spans) order.push_back({span, net});
  std::sort(order.begin(), order.end());
  std::vector<int> track_end;
  std::map<std::string, int> out;
  for (const auto& [span, net] : order) {
    if (span.first == span.second) {
      out[net] = -1;
      continue;
    }
    int t = 0;
    while (t < static_cast<int>(track_end.size()) && track_end[t] >= span.first) ++t;
    if (t == static_cast<int>(track_end.size())) {
      if (t >= max_tracks) throw RoutingError("channel " + channel + " congested: more than " +
                                              std::to_string(max_tracks) + " tracks needed");
      track_end.push_back(span.second);
    } else {
      track_end[t] = span.second;
    }
    out[net] = t;
  }
  return out;
}

inline int track_count(const std::map<std::string, int>& tracks) {
  int n = 0;
  for (const auto& [net, t] : tracks) n = std::max(n, t + 1);
  return n;
}

struct RouteChannel {
  int a = 0, b = 0;  ///< block indices, a before b in grid order
  std::map<std::string, std::pair<int, int>> spans;
  std::map<std::string, int> tracks;
};

inline Rect pin_rect(Side side, int64_t along, int64_t w, int64_t h, const FloorplanRules& fr) {
  auto a = static_cast<int32_t>(along);
  int32_t hw = fr.pin_w / 2, d = fr.pin_depth;
  auto W = static_cast<int32_t>(w), H = static_cast<int32_t>(h);
  switch (side) {
    case Side::LEFT: return {0, a - hw, d, a + hw};
    case Side::RIGHT: return {W - d, a - hw, W, a + hw};
    case Side::BOTTOM: return {a - hw, 0, a + hw, d};
    case Side::TOP: return {a - hw, H - d, a + hw, H};
  }
  return {};
}

inline Rect bbox(const Rect& a, const Rect& b) { return a.united(b); }

inline Rect clip32(int64_t x0, int64_t y0, int64_t x1, int64_t y1) {
  return {static_cast<int32_t>(x0), static_cast<int32_t>(y0), static_cast<int32_t>(x1), static_cast<int32_t>(y1)};
}

}  // namespace detail

/// Places and routes the bank; fills design.layout and design.layouts.
inline void floorplan_bank(BankDesign& d, const Technology& tech, const FloorplanRules& fr = {}) {
  using namespace detail;
  LayoutLibrary lib;
  const auto& bitname = bitcell_name(d.config.cell_variant);
  lib.emplace(bitname, d.cells.at(bitname).layout);
  const auto arr = array_layout(d, tech, fr);
  lib.emplace(arr.name, arr);
  int64_t aw = arr.width(), ah = arr.height();
  auto m2 = tech.layer("metal2").gds, m3 = tech.layer("metal3").gds, m1 = tech.layer("metal1").gds;
  auto v2 = tech.layer("via2").gds;
  auto F = fr.frame;

  // blocks and their cores
  std::vector<FloorBlock> blocks;
  std::map<std::pair<int, int>, int> at;
  const Instance* array_inst = nullptr;
  auto find_inst = [&](const std::string& n) -> const Instance& {
    for (const auto& i : d.top.instances)
      if (i.name == n) return i;
    throw RoutingError("slot names unknown instance '" + n + "'");
  };
  for (const auto& slot : d.slots) {
    const auto& inst = find_inst(slot.instance);
    if (slot.col == 1 && slot.row == 1) {
      array_inst = &inst;
      continue;
    }
    FloorBlock b;
    b.inst = inst.name;
    b.cell = inst.subckt;
    b.col = slot.col;
    b.row = slot.row;
    at[{b.col, b.row}] = static_cast<int>(blocks.size());
    blocks.push_back(std::move(b));
  }
  // edge blocks stretch along the array side
  for (auto& b : blocks) {
    if (b.row != 1 && b.col != 1) continue;
    auto core = b.row == 1 ? shelf_pack(d.blocks.at(b.cell), d, lib, fr, 0, ah - 2 * F)
                           : shelf_pack(d.blocks.at(b.cell), d, lib, fr, aw - 2 * F);
    b.core = &lib.insert_or_assign(b.cell, std::move(core)).first->second;
  }
  // corner blocks: square, or matched to the neighbouring edge block's height or width,
  // whichever grows the estimated die least
  int64_t est_w = aw, est_h = ah;
  for (const auto& b : blocks) {
    if (b.row == 1) est_w += b.core->width() + 2 * F;
    if (b.col == 1) est_h += b.core->height() + 2 * F;
  }
  for (auto& b : blocks) {
    if (b.row == 1 || b.col == 1) continue;
    int64_t wc = 0, hr = 0;
    if (auto it = at.find({b.col, 1}); it != at.end()) wc = blocks[it->second].core->width();
    if (auto it = at.find({1, b.row}); it != at.end()) hr = blocks[it->second].core->height();
    std::pair<int64_t, int64_t> best_key{INT64_MAX, 0};
    LayoutLibrary best_lib;
    LayoutCell best;
    for (int mode = 0; mode < 3; ++mode) {
      if ((mode == 1 && hr <= 0) || (mode == 2 && wc <= 0)) continue;
      LayoutLibrary trial = lib;
      auto core = mode == 0   ? shelf_pack(d.blocks.at(b.cell), d, trial, fr, 0)
                  : mode == 1 ? shelf_pack(d.blocks.at(b.cell), d, trial, fr, 0, hr)
                              : shelf_pack(d.blocks.at(b.cell), d, trial, fr, wc);
      int64_t grow_w = std::max<int64_t>(0, core.width() - wc), grow_h = std::max<int64_t>(0, core.height() - hr);
      std::pair<int64_t, int64_t> key{(est_w + grow_w) * (est_h + grow_h), mode};
      if (key < best_key) {
        best_key = key;
        best_lib = std::move(trial);
        best = std::move(core);
      }
    }
    lib = std::move(best_lib);
    lib.insert_or_assign(b.cell, std::move(best));
    for (auto& o : blocks)
      if (lib.contains(o.cell)) o.core = &lib.at(o.cell);
  }
  if (!array_inst) throw RoutingError("no array slot");

  // net membership
  std::set<std::string> array_nets(array_inst->connections.begin(), array_inst->connections.end());
  std::set<std::string> io(d.top.ports.begin(), d.top.ports.end());
  std::vector<std::string> net_order;
  std::map<std::string, std::vector<std::pair<int, std::string>>> members;  // net -> (block, port)
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& inst = find_inst(blocks[bi].inst);
    const auto& sub = d.blocks.at(inst.subckt);
    for (size_t k = 0; k < inst.connections.size(); ++k) {
      const auto& n = inst.connections[k];
      if (is_supply_net(n)) continue;
      if (!members.count(n)) net_order.push_back(n);
      members[n].push_back({static_cast<int>(bi), sub.ports[k]});
    }
  }
  auto priority = [&](int bi) {
    return std::pair<int, int>{blocks[bi].cell.find("control") == std::string::npos ? 1 : 0, bi};
  };
  auto desired = [&](int bi, const std::string& port, Side side) {
    const auto& b = blocks[bi];
    bool x = along_x(side);
    int64_t c = port_anchor(d.blocks.at(b.cell), *b.core, lib, port, x);
    int64_t len = x ? b.core->width() : b.core->height();
    int64_t dist = slots_from_high(side, b.col, b.row) ? F + (len - c) : F + c;
    return static_cast<int>(std::max<int64_t>(0, std::llround(double(dist - fr.slot_offset) / fr.pitch)));
  };

  std::map<std::pair<int, int>, std::vector<SlotRequest>> channel_reqs;
  std::map<std::pair<int, int>, std::vector<SlotRequest>> io_reqs;  // (block, side)
  for (const auto& net : net_order) {
    const auto& mem = members[net];
    if (array_nets.count(net)) {
      for (const auto& [bi, port] : mem) {
        auto& b = blocks[bi];
        if (std::abs(b.col - 1) + std::abs(b.row - 1) != 1)
          throw RoutingError("net " + net + ": block " + b.inst + " is not next to the array");
        b.pins.push_back({net, facing(1 - b.col, 1 - b.row), -1, 0});
      }
      continue;
    }
    int hub = mem.front().first;
    std::string hub_port = mem.front().second;
    for (const auto& [bi, port] : mem)
      if (priority(bi) < priority(hub)) {
        hub = bi;
        hub_port = port;
      }
    if (io.count(net)) {
      Side s = outer_side(blocks[hub].col, blocks[hub].row);
      io_reqs[{hub, static_cast<int>(s)}].push_back({&blocks[hub], net, s, desired(hub, hub_port, s)});
    }
    std::set<int> seen = {hub};
    for (const auto& [bi, port] : mem) {
      if (!seen.insert(bi).second) continue;
      int dc = blocks[bi].col - blocks[hub].col, dr = blocks[bi].row - blocks[hub].row;
      if (std::abs(dc) + std::abs(dr) != 1)
        throw RoutingError("net " + net + ": blocks " + blocks[hub].inst + " and " + blocks[bi].inst +
                           " are not neighbours");
      Side hs = facing(dc, dr), ms = facing(-dc, -dr);
      auto key = std::minmax(hub, bi);
      auto& reqs = channel_reqs[{key.first, key.second}];
      reqs.push_back({&blocks[hub], net, hs, desired(hub, hub_port, hs)});
      reqs.push_back({&blocks[bi], net, ms, desired(bi, port, ms)});
    }
  }
  for (auto& [k, reqs] : channel_reqs) assign_slots(reqs);
  for (auto& [k, reqs] : io_reqs) assign_slots(reqs);

  // channel track assignment (in slot units, position independent)
  std::vector<RouteChannel> channels;
  for (const auto& [key, reqs] : channel_reqs) {
    RouteChannel ch;
    ch.a = key.first;
    ch.b = key.second;
    for (int bi : {ch.a, ch.b})
      for (const auto& p : blocks[bi].pins) {
        if (p.slot < 0) continue;
        int dc = blocks[bi == ch.a ? ch.b : ch.a].col - blocks[bi].col;
        int dr = blocks[bi == ch.a ? ch.b : ch.a].row - blocks[bi].row;
        if (p.side != facing(dc, dr)) continue;
        auto it = ch.spans.find(p.net);
        if (it == ch.spans.end()) ch.spans[p.net] = {p.slot, p.slot};
        else it->second = {std::min(it->second.first, p.slot), std::max(it->second.second, p.slot)};
      }
    ch.tracks = left_edge(ch.spans, fr.max_tracks, blocks[ch.a].inst + "/" + blocks[ch.b].inst);
    channels.push_back(std::move(ch));
  }

  // block sizes
  for (auto& b : blocks) {
    b.w = b.core->width() + 2 * F;
    b.h = b.core->height() + 2 * F;
    for (const auto& [side, n] : b.slots_used) {
      int64_t need = fr.slot_offset + int64_t{n} * fr.pitch + F;
      if (along_x(side)) b.w = std::max(b.w, need);
      else b.h = std::max(b.h, need);
    }
    if (b.row == 1) b.h = std::max(b.h, ah);
    if (b.col == 1) b.w = std::max(b.w, aw);
    b.core_x = b.col == 0 ? b.w - F - b.core->width() : b.col == 2 ? F : (b.w - b.core->width()) / 2;
    b.core_y = b.row == 0 ? b.h - F - b.core->height() : b.row == 2 ? F : (b.h - b.core->height()) / 2;
  }

  // grid
  int64_t colw[3] = {0, aw, 0}, rowh[3] = {0, ah, 0};
  for (const auto& b : blocks) {
    colw[b.col] = std::max(colw[b.col], b.w);
    rowh[b.row] = std::max(rowh[b.row], b.h);
  }
  int64_t vband[2] = {0, 0}, hband[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    vband[i] = colw[i == 0 ? 0 : 2] > 0 ? fr.straight_channel : 0;
    hband[i] = rowh[i == 0 ? 0 : 2] > 0 ? fr.straight_channel : 0;
  }
  for (const auto& ch : channels) {
    const auto& A = blocks[ch.a];
    const auto& B = blocks[ch.b];
    int64_t width = 2 * fr.channel_margin + int64_t{track_count(ch.tracks)} * fr.pitch;
    if (A.col == B.col) {
      auto& band = hband[std::min(A.row, B.row)];
      band = std::max(band, width);
    } else {
      auto& band = vband[std::min(A.col, B.col)];
      band = std::max(band, width);
    }
  }
  int64_t colx[3], rowy[3];
  colx[0] = 0;
  colx[1] = colw[0] + vband[0];
  colx[2] = colx[1] + colw[1] + vband[1];
  rowy[0] = 0;
  rowy[1] = rowh[0] + hband[0];
  rowy[2] = rowy[1] + rowh[1] + hband[1];
  int64_t core_w = colx[2] + colw[2], core_h = rowy[2] + rowh[2];

  for (auto& b : blocks) {
    b.x0 = b.col == 0 ? colx[0] + colw[0] - b.w : b.col == 2 ? colx[2] : colx[1] + (colw[1] - b.w) / 2;
    b.y0 = b.row == 0 ? rowy[0] + rowh[0] - b.h : b.row == 2 ? rowy[2] : rowy[1] + (rowh[1] - b.h) / 2;
  }
  int64_t ax0 = colx[1] + (colw[1] - aw) / 2, ay0 = rowy[1] + (rowh[1] - ah) / 2;
  auto array_pin = [&](const std::string& net) {
    const auto* p = arr.find_pin(net);
    if (!p) throw RoutingError("array has no pin for " + net);
    return p->rect.translated(static_cast<int32_t>(ax0 - arr.boundary.x0), static_cast<int32_t>(ay0 - arr.boundary.y0));
  };

  // pin coordinates and block frames
  LayoutCell top;
  top.name = d.top.name;
  top.place("bitcell_array", static_cast<int32_t>(ax0 - arr.boundary.x0), static_cast<int32_t>(ay0 - arr.boundary.y0));
  std::map<std::pair<int, std::string>, std::vector<Rect>> global_pins;  // (block, net) -> rects
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    auto& b = blocks[bi];
    LayoutCell frame;
    frame.name = b.cell + "_frame";
    frame.place(b.cell, static_cast<int32_t>(b.core_x - b.core->boundary.x0),
                static_cast<int32_t>(b.core_y - b.core->boundary.y0));
    frame.boundary = clip32(0, 0, b.w, b.h);
    for (auto& p : b.pins) {
      bool x = along_x(p.side);
      int64_t len = x ? b.w : b.h;
      if (p.slot >= 0) {
        int64_t off = fr.slot_offset + int64_t{p.slot} * fr.pitch;
        p.along = slots_from_high(p.side, b.col, b.row) ? len - off : off;
      } else {
        auto r = array_pin(p.net);
        p.along = x ? (int64_t{r.x0} + r.x1) / 2 - b.x0 : (int64_t{r.y0} + r.y1) / 2 - b.y0;
      }
      auto r = pin_rect(p.side, p.along, b.w, b.h, fr);
      frame.add_pin(p.net, x ? m2 : m3, r);
      global_pins[{static_cast<int>(bi), p.net}].push_back(
          r.translated(static_cast<int32_t>(b.x0), static_cast<int32_t>(b.y0)));
    }
    top.place(frame.name, static_cast<int32_t>(b.x0), static_cast<int32_t>(b.y0));
    lib.insert_or_assign(frame.name, std::move(frame));
  }

  // straight connections to the array
  for (size_t bi = 0; bi < blocks.size(); ++bi)
    for (const auto& p : blocks[bi].pins) {
      if (p.slot >= 0) continue;
      auto wire = bbox(global_pins.at({static_cast<int>(bi), p.net}).front(), array_pin(p.net));
      top.add(along_x(p.side) ? m2 : m3, wire);
    }

  // channel routing
  int32_t hw = fr.pin_w / 2, hv = fr.via / 2;
  for (const auto& ch : channels) {
    const auto& A = blocks[ch.a];
    const auto& B = blocks[ch.b];
    bool horizontal = A.col == B.col;  // channel runs along x between vertically stacked blocks
    int64_t band0 = horizontal ? rowy[std::min(A.row, B.row)] + rowh[std::min(A.row, B.row)]
                               : colx[std::min(A.col, B.col)] + colw[std::min(A.col, B.col)];
    for (const auto& [net, track] : ch.tracks) {
      std::vector<Rect> pins;
      for (int bi : {ch.a, ch.b}) {
        int other = bi == ch.a ? ch.b : ch.a;
        Side s = facing(blocks[other].col - blocks[bi].col, blocks[other].row - blocks[bi].row);
        const auto& rects = global_pins.at({bi, net});
        for (const auto& r : rects) {
          bool on_side = horizontal ? (s == Side::TOP ? r.y1 == blocks[bi].y0 + blocks[bi].h : r.y0 == blocks[bi].y0)
                                    : (s == Side::RIGHT ? r.x1 == blocks[bi].x0 + blocks[bi].w : r.x0 == blocks[bi].x0);
          if (on_side) pins.push_back(r);
        }
      }
      if (track < 0) {
        Rect w = pins.front();
        for (const auto& r : pins) w = bbox(w, r);
        top.add(horizontal ? m2 : m3, w);
        continue;
      }
      auto t = static_cast<int32_t>(band0 + fr.channel_margin + int64_t{track} * fr.pitch);
      Rect run;
      for (const auto& r : pins) {
        int32_t c = horizontal ? (r.x0 + r.x1) / 2 : (r.y0 + r.y1) / 2;
        Rect pad = horizontal ? Rect{c - hw, t - hw, c + hw, t + hw} : Rect{t - hw, c - hw, t + hw, c + hw};
        top.add(horizontal ? m2 : m3, bbox(r, pad));
        top.add(v2, horizontal ? Rect{c - hv, t - hv, c + hv, t + hv} : Rect{t - hv, c - hv, t + hv, c + hv});
        run = run.united(pad);
      }
      top.add(horizontal ? m3 : m2, run);
    }
  }

  // supply rings
  std::vector<std::string> rings = {"vdd", "gnd"};
  if (io.count("vwwl")) rings.push_back("vwwl");
  Rect core = clip32(0, 0, core_w, core_h);
  Rect die = core;
  for (size_t i = 0; i < rings.size(); ++i) {
    int32_t o = fr.ring_gap + static_cast<int32_t>(i) * (fr.ring_w + fr.ring_space);
    Rect in = core.expanded(o), out = core.expanded(o + fr.ring_w);
    top.add(m1, {out.x0, out.y0, out.x1, in.y0});
    top.add(m1, {out.x0, in.y1, out.x1, out.y1});
    top.add(m1, {out.x0, in.y0, in.x0, in.y1});
    top.add(m1, {in.x1, in.y0, out.x1, in.y1});
    top.add_pin(rings[i], m1, {out.x0, in.y0, in.x0, in.y1});
    die = out;
  }
  die = die.expanded(fr.die_margin);

  // IO wires to the die edge
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    Side s = outer_side(b.col, b.row);
    for (const auto& p : b.pins) {
      if (p.side != s || !io.count(p.net) || p.slot < 0) continue;
      const auto& rects = global_pins.at({static_cast<int>(bi), p.net});
      Rect r = rects.front();
      for (const auto& q : rects) {
        bool on = s == Side::LEFT ? q.x0 == b.x0 : s == Side::RIGHT ? q.x1 == b.x0 + b.w
                  : s == Side::BOTTOM ? q.y0 == b.y0 : q.y1 == b.y0 + b.h;
        if (on) r = q;
      }
      Rect end;
      switch (s) {
        case Side::LEFT: end = {die.x0, r.y0, die.x0 + fr.pin_depth, r.y1}; break;
        case Side::RIGHT: end = {die.x1 - fr.pin_depth, r.y0, die.x1, r.y1}; break;
        case Side::BOTTOM: end = {r.x0, die.y0, r.x1, die.y0 + fr.pin_depth}; break;
        case Side::TOP: end = {r.x0, die.y1 - fr.pin_depth, r.x1, die.y1}; break;
      }
      auto layer = along_x(s) ? m2 : m3;
      top.add(layer, bbox(r, end));
      top.add_pin(p.net, layer, end);
    }
  }
  top.boundary = die;
  lib.insert_or_assign(top.name, top);
  d.layout = std::move(top);
  d.layouts = std::move(lib);
}

/// Netlist plus floorplan.
inline BankDesign build_bank(const MemoryConfig& cfg, const Technology& tech, const FloorplanRules& fr = {}) {
  auto d = assemble_bank(cfg, tech);
  floorplan_bank(d, tech, fr);
  return d;
}

}  // namespace gcram
