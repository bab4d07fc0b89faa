// SPDX-License-Identifier: Apache-2.0
//
// Flat rectangle design-rule checker.
//
// Width is checked per rectangle. Spacing is checked between rectangles that
// belong to different touching-components of the same layer, using the
// Euclidean corner-to-corner distance. Minimum area applies to the union of a
// component. Enclosure requires the inner shape grown by the rule value to be
// covered by the union of the outer layer. Extension requires layer_a to
// cross layer_b completely and overhang by the rule value on both sides.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcram/layout.hpp"
#include "gcram/technology.hpp"

namespace gcram {

struct Violation {
  RuleKind kind = RuleKind::MIN_WIDTH;
  std::string layer_a;
  std::string layer_b;
  Rect where;
  double required = 0;  ///< um (um^2 for area)
  double actual = 0;

  auto operator<=>(const Violation& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = layer_a <=> o.layer_a; c != 0) return c;
    if (auto c = layer_b <=> o.layer_b; c != 0) return c;
    if (auto c = where <=> o.where; c != 0) return c;
    if (required != o.required) return required < o.required ? std::strong_ordering::less : std::strong_ordering::greater;
    if (actual != o.actual) return actual < o.actual ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const Violation&) const = default;
};

inline std::string to_string(const Violation& v) {
  std::ostringstream os;
  os << to_string(v.kind) << " " << v.layer_a;
  if (!v.layer_b.empty()) os << "/" << v.layer_b;
  os << " at (" << v.where.x0 << "," << v.where.y0 << ")-(" << v.where.x1 << "," << v.where.y1 << ")"
     << " required " << text::num(v.required) << " actual " << text::num(v.actual);
  return os.str();
}

namespace detail {

/// Area of the union of rectangles; coordinate compression, intended for small sets.
inline int64_t union_area(const std::vector<Rect>& rects) {
  std::vector<int32_t> xs;
  for (const auto& r : rects)
    if (r.valid()) xs.insert(xs.end(), {r.x0, r.x1});
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  int64_t total = 0;
  std::vector<std::pair<int32_t, int32_t>> spans;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    spans.clear();
    for (const auto& r : rects)
      if (r.valid() && r.x0 <= xs[i] && r.x1 >= xs[i + 1]) spans.push_back({r.y0, r.y1});
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    int64_t covered = 0;
    int32_t lo = spans[0].first, hi = spans[0].second;
    for (size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].first > hi) {
        covered += hi - lo;
        lo = spans[k].first;
        hi = spans[k].second;
      } else {
        hi = std::max(hi, spans[k].second);
      }
    }
    covered += hi - lo;
    total += covered * (int64_t{xs[i + 1]} - xs[i]);
  }
  return total;
}

/// Uniform-bin spatial hash over one layer's rectangles.
class BinIndex {
 public:
  BinIndex(const std::vector<Rect>& rects, int32_t bin) : rects_(rects), bin_(bin) {
    for (int i = 0; i < static_cast<int>(rects.size()); ++i)
      visit_bins(rects[i], [&](int64_t key) { bins_[key].push_back(i); });
    stamp_.assign(rects.size(), -1);
  }

  /// Calls fn(j) once for every rectangle whose bins intersect `query` (inclusive edges).
  template <class Fn>
  void query(const Rect& query, int tag, Fn&& fn) {
    visit_bins(query, [&](int64_t key) {
      auto it = bins_.find(key);
      if (it == bins_.end()) return;
      for (int j : it->second) {
        if (stamp_[j] == tag) continue;
        stamp_[j] = tag;
        fn(j);
      }
    });
  }

 private:
  static int64_t floordiv(int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
  template <class Fn>
  void visit_bins(const Rect& r, Fn&& fn) const {
    int64_t bx0 = floordiv(r.x0, bin_), bx1 = floordiv(r.x1, bin_);
    int64_t by0 = floordiv(r.y0, bin_), by1 = floordiv(r.y1, bin_);
    for (int64_t bx = bx0; bx <= bx1; ++bx)
      for (int64_t by = by0; by <= by1; ++by) fn((bx << 32) ^ (by & 0xFFFFFFFF));
  }

  const std::vector<Rect>& rects_;
  int32_t bin_;
  std::unordered_map<int64_t, std::vector<int>> bins_;
  std::vector<int> stamp_;
};

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline constexpr int32_t kBin = 2000;

inline double gap_dbu(const Rect& a, const Rect& b) {
  int64_t dx = std::max<int64_t>({0, int64_t{a.x0} - b.x1, int64_t{b.x0} - a.x1});
  int64_t dy = std::max<int64_t>({0, int64_t{a.y0} - b.y1, int64_t{b.y0} - a.y1});
  return std::hypot(static_cast<double>(dx), static_cast<double>(dy));
}

struct LayerShapes {
  std::vector<Rect> rects;
  std::vector<int> component;  // filled by connect()
  void connect() {
    DisjointSets ds(rects.size());
    BinIndex index(rects, kBin);
    for (int i = 0; i < static_cast<int>(rects.size()); ++i)
      index.query(rects[i], i, [&](int j) {
        if (j != i && rects[i].touches(rects[j])) ds.unite(i, j);
      });
    component.resize(rects.size());
    for (size_t i = 0; i < rects.size(); ++i) component[i] = ds.find(static_cast<int>(i));
  }
};

}  // namespace detail

/// Checks flat geometry against every rule of `tech`. Shapes on layers unknown to the
/// technology are ignored. The result is sorted.
inline std::vector<Violation> run_drc(const std::vector<Shape>& shapes, const Technology& tech) {
  std::map<std::string, detail::LayerShapes> by_layer;
  for (const auto& s : shapes)
    if (const auto* l = tech.find_layer(s.layer); l && s.rect.valid()) by_layer[l->name].rects.push_back(s.rect);
  for (auto& [name, ls] : by_layer) {
    std::sort(ls.rects.begin(), ls.rects.end());
    ls.rects.erase(std::unique(ls.rects.begin(), ls.rects.end()), ls.rects.end());
    ls.connect();
  }
  const double dbu = tech.dbu_per_um;
  std::vector<Violation> out;
  static const detail::LayerShapes kEmpty;

  for (const auto& rule : tech.rules) {
    auto it = by_layer.find(rule.layer_a);
    const auto& a = it == by_layer.end() ? kEmpty : it->second;
    switch (rule.kind) {
      case RuleKind::MIN_WIDTH: {
        auto w = tech.to_dbu(rule.value);
        for (const auto& r : a.rects) {
          auto m = std::min(r.width(), r.height());
          if (m < w) out.push_back({rule.kind, rule.layer_a, "", r, rule.value, m / dbu});
        }
        break;
      }
      case RuleKind::MIN_SPACING: {
        auto s = tech.to_dbu(rule.value);
        detail::BinIndex index(a.rects, detail::kBin);
        for (int i = 0; i < static_cast<int>(a.rects.size()); ++i) {
          const auto& ri = a.rects[i];
          index.query(ri.expanded(s), i, [&](int j) {
            if (j <= i || a.component[i] == a.component[j]) return;
            double g = detail::gap_dbu(ri, a.rects[j]);
            if (g < s) out.push_back({rule.kind, rule.layer_a, "", ri.united(a.rects[j]), rule.value, g / dbu});
          });
        }
        break;
      }
      case RuleKind::MIN_AREA: {
        double need = rule.value * dbu * dbu;
        std::map<int, std::vector<Rect>> comps;
        for (size_t i = 0; i < a.rects.size(); ++i) comps[a.component[i]].push_back(a.rects[i]);
        for (const auto& [c, rects] : comps) {
          int64_t biggest = 0;
          Rect box;
          for (const auto& r : rects) {
            biggest = std::max(biggest, r.area());
            box = box.united(r);
          }
          if (static_cast<double>(biggest) >= need) continue;
          auto area = detail::union_area(rects);
          if (static_cast<double>(area) < need)
            out.push_back({rule.kind, rule.layer_a, "", box, rule.value, area / (dbu * dbu)});
        }
        break;
      }
      case RuleKind::ENCLOSURE: {
        auto e = tech.to_dbu(rule.value);
        auto bt = by_layer.find(rule.layer_b);
        if (bt == by_layer.end()) break;
        detail::BinIndex index(a.rects, detail::kBin);
        int tag = 0;
        for (const auto& inner : bt->second.rects) {
          Rect need = inner.expanded(e);
          std::vector<Rect> clipped;
          index.query(need, tag++, [&](int j) {
            Rect c = a.rects[j].intersected(need);
            if (c.valid()) clipped.push_back(c);
          });
          if (detail::union_area(clipped) != need.area())
            out.push_back({rule.kind, rule.layer_a, rule.layer_b, inner, rule.value, 0.0});
        }
        break;
      }
      case RuleKind::EXTENSION: {
        auto x = tech.to_dbu(rule.value);
        auto bt = by_layer.find(rule.layer_b);
        if (bt == by_layer.end()) break;
        const auto& b = bt->second;
        detail::BinIndex index(b.rects, detail::kBin);
        for (int i = 0; i < static_cast<int>(a.rects.size()); ++i) {
          const auto& ra = a.rects[i];
          index.query(ra, i, [&](int j) {
            const auto& rb = b.rects[j];
            if (!ra.overlaps(rb)) return;
            int64_t over = -1;
            if (ra.y0 <= rb.y0 && ra.y1 >= rb.y1 && ra.x0 >= rb.x0 && ra.x1 <= rb.x1)
              over = std::min(int64_t{rb.y0} - ra.y0, int64_t{ra.y1} - rb.y1);
            else if (ra.x0 <= rb.x0 && ra.x1 >= rb.x1 && ra.y0 >= rb.y0 && ra.y1 <= rb.y1)
              over = std::min(int64_t{rb.x0} - ra.x0, int64_t{ra.x1} - rb.x1);
            if (over < x)
              out.push_back({rule.kind, rule.layer_a, rule.layer_b, ra.intersected(rb), rule.value,
                             over < 0 ? 0.0 : over / dbu});
          });
        }
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Violation> run_drc(const LayoutCell& top, const LayoutLibrary& lib, const Technology& tech) {
  return run_drc(flatten_shapes(top, lib, true), tech);
}

}  // namespace gcram
