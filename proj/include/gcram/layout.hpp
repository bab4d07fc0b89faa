// SPDX-License-Identifier: Apache-2.0
//
// Rectangle-only geometry database. Coordinates are database units (dbu).

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gcram/technology.hpp"

namespace gcram {

struct Rect {
  int32_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int64_t width() const { return int64_t{x1} - x0; }
  int64_t height() const { return int64_t{y1} - y0; }
  int64_t area() const { return width() * height(); }
  bool valid() const { return x1 > x0 && y1 > y0; }
  bool empty() const { return !valid(); }
  bool contains(const Rect& o) const { return o.x0 >= x0 && o.y0 >= y0 && o.x1 <= x1 && o.y1 <= y1; }
  /// Interiors overlap or edges/corners touch.
  bool touches(const Rect& o) const { return o.x0 <= x1 && x0 <= o.x1 && o.y0 <= y1 && y0 <= o.y1; }
  bool overlaps(const Rect& o) const { return o.x0 < x1 && x0 < o.x1 && o.y0 < y1 && y0 < o.y1; }
  Rect expanded(int32_t d) const { return {x0 - d, y0 - d, x1 + d, y1 + d}; }
  Rect translated(int32_t dx, int32_t dy) const { return {x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }
  Rect united(const Rect& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    return {std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1), std::max(y1, o.y1)};
  }
  Rect intersected(const Rect& o) const {
    return {std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1), std::min(y1, o.y1)};
  }
  auto operator<=>(const Rect&) const = default;
};

enum class Orientation { R0, R90, R180, R270, MX, MY };

inline std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::R0: return "R0";
    case Orientation::R90: return "R90";
    case Orientation::R180: return "R180";
    case Orientation::R270: return "R270";
    case Orientation::MX: return "MX";
    case Orientation::MY: return "MY";
  }
  return "?";
}

struct Shape {
  GdsLayer layer;
  Rect rect;
  auto operator<=>(const Shape&) const = default;
};

struct Pin {
  std::string name;
  GdsLayer layer;
  Rect rect;
  auto operator<=>(const Pin&) const = default;
};

struct Placement {
  std::string cell;
  int32_t dx = 0, dy = 0;
  Orientation orient = Orientation::R0;
  bool operator==(const Placement&) const = default;
};

struct LayoutCell {
  std::string name;
  std::vector<Shape> rects;
  std::vector<Pin> pins;
  std::vector<Placement> placements;
  Rect boundary;

  void add(GdsLayer layer, Rect r) {
    if (!r.valid()) throw std::invalid_argument("degenerate rectangle in cell '" + name + "'");
    rects.push_back({layer, r});
  }
  void add_pin(std::string pin_name, GdsLayer layer, Rect r) {
    if (!r.valid()) throw std::invalid_argument("degenerate pin in cell '" + name + "'");
    pins.push_back({std::move(pin_name), layer, r});
  }
  void place(std::string cell, int32_t dx, int32_t dy, Orientation o = Orientation::R0) {
    placements.push_back({std::move(cell), dx, dy, o});
  }
  const Pin* find_pin(std::string_view n) const {
    for (const auto& p : pins)
      if (p.name == n) return &p;
    return nullptr;
  }
  int64_t width() const { return boundary.width(); }
  int64_t height() const { return boundary.height(); }

  bool operator==(const LayoutCell&) const = default;
};

using LayoutLibrary = std::map<std::string, LayoutCell>;

/// Applies orientation about the origin, then translation.
inline Rect transform(const Rect& r, Orientation o, int32_t dx, int32_t dy) {
  Rect t;
  switch (o) {
    case Orientation::R0: t = r; break;
    case Orientation::R90: t = {-r.y1, r.x0, -r.y0, r.x1}; break;
    case Orientation::R180: t = {-r.x1, -r.y1, -r.x0, -r.y0}; break;
    case Orientation::R270: t = {r.y0, -r.x1, r.y1, -r.x0}; break;
    case Orientation::MX: t = {r.x0, -r.y1, r.x1, -r.y0}; break;
    case Orientation::MY: t = {-r.x1, r.y0, -r.x0, r.y1}; break;
  }
  return t.translated(dx, dy);
}

inline const LayoutCell& resolve_cell(const LayoutLibrary& lib, const std::string& name) {
  auto it = lib.find(name);
  if (it == lib.end()) throw std::out_of_range("unresolved layout cell '" + name + "'");
  return it->second;
}

namespace detail {

struct Xform {
  Orientation o;
  int32_t dx, dy;
};

// Composition of a placement transform inside a parent transform.
inline Xform compose(const Xform& parent, const Placement& p) {
  // image of the child's origin and basis under the parent
  Rect origin = transform(Rect{p.dx, p.dy, p.dx, p.dy}, parent.o, parent.dx, parent.dy);
  auto apply = [](Orientation o, int x, int y) -> std::pair<int, int> {
    switch (o) {
      case Orientation::R0: return {x, y};
      case Orientation::R90: return {-y, x};
      case Orientation::R180: return {-x, -y};
      case Orientation::R270: return {y, -x};
      case Orientation::MX: return {x, -y};
      case Orientation::MY: return {-x, y};
    }
    return {x, y};
  };
  auto ex = apply(parent.o, apply(p.orient, 1, 0).first, apply(p.orient, 1, 0).second);
  auto ey = apply(parent.o, apply(p.orient, 0, 1).first, apply(p.orient, 0, 1).second);
  static constexpr Orientation all[] = {Orientation::R0, Orientation::R90, Orientation::R180,
                                        Orientation::R270, Orientation::MX, Orientation::MY};
  for (auto cand : all) {
    if (apply(cand, 1, 0) == ex && apply(cand, 0, 1) == ey) return {cand, origin.x0, origin.y0};
  }
  throw std::logic_error("composed orientation is not representable (mirror with rotation)");
}

inline void flatten_geometry(const LayoutCell& cell, const LayoutLibrary& lib, const Xform& xf, bool with_pins,
                             std::vector<Shape>& out, int depth) {
  if (depth > 64) throw std::runtime_error("layout hierarchy too deep at '" + cell.name + "'");
  for (const auto& s : cell.rects) out.push_back({s.layer, transform(s.rect, xf.o, xf.dx, xf.dy)});
  if (with_pins)
    for (const auto& p : cell.pins) out.push_back({p.layer, transform(p.rect, xf.o, xf.dx, xf.dy)});
  for (const auto& pl : cell.placements)
    flatten_geometry(resolve_cell(lib, pl.cell), lib, compose(xf, pl), with_pins, out, depth + 1);
}

}  // namespace detail

/// All shapes of the hierarchy in top coordinates; pin shapes included when requested.
inline std::vector<Shape> flatten_shapes(const LayoutCell& top, const LayoutLibrary& lib, bool with_pins = true) {
  std::vector<Shape> out;
  detail::flatten_geometry(top, lib, detail::Xform{Orientation::R0, 0, 0}, with_pins, out, 0);
  return out;
}

/// Bounding box of a cell's own geometry plus its placed children's boundaries.
inline Rect geometry_bbox(const LayoutCell& cell, const LayoutLibrary& lib) {
  Rect box;
  for (const auto& s : cell.rects) box = box.united(s.rect);
  for (const auto& p : cell.pins) box = box.united(p.rect);
  for (const auto& pl : cell.placements) {
    const auto& child = resolve_cell(lib, pl.cell);
    box = box.united(transform(child.boundary, pl.orient, pl.dx, pl.dy));
  }
  return box;
}

/// Cells reachable from `roots`, children before parents, each once.
inline std::vector<const LayoutCell*> layout_order(const std::vector<const LayoutCell*>& roots,
                                                   const LayoutLibrary& lib) {
  std::vector<const LayoutCell*> out;
  std::map<std::string, int> state;
  auto visit = [&](auto& self, const LayoutCell& c) -> void {
    state[c.name] = 1;
    for (const auto& pl : c.placements) {
      const auto& child = resolve_cell(lib, pl.cell);
      if (state[child.name] == 1) throw std::runtime_error("layout hierarchy cycle at '" + child.name + "'");
      if (state[child.name] == 0) self(self, child);
    }
    state[c.name] = 2;
    out.push_back(&c);
  };
  for (const auto* r : roots)
    if (state[r->name] == 0) visit(visit, *r);
  return out;
}

/// One shape per line: `<cell> <layer>/<datatype> x0 y0 x1 y1`, pins prefixed by `pin <name>`.
inline std::string geometry_dump(const LayoutCell& cell) {
  std::ostringstream os;
  os << "cell " << cell.name << " boundary " << cell.boundary.x0 << " " << cell.boundary.y0 << " "
     << cell.boundary.x1 << " " << cell.boundary.y1 << "\n";
  for (const auto& s : cell.rects)
    os << "rect " << s.layer.layer << "/" << s.layer.datatype << " " << s.rect.x0 << " " << s.rect.y0 << " "
       << s.rect.x1 << " " << s.rect.y1 << "\n";
  for (const auto& p : cell.pins)
    os << "pin " << p.name << " " << p.layer.layer << "/" << p.layer.datatype << " " << p.rect.x0 << " "
       << p.rect.y0 << " " << p.rect.x1 << " " << p.rect.y1 << "\n";
  for (const auto& pl : cell.placements)
    os << "sref " << pl.cell << " " << pl.dx << " " << pl.dy << " " << to_string(pl.orient) << "\n";
  return os.str();
}

}  // namespace gcram
