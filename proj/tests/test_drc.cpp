#include <gtest/gtest.h>

#include <random>

#include "gcram/drc.hpp"

using namespace gcram;

namespace {

const char* kTech = R"(name = t
dbu_per_um = 1000
[layer]
name = m1
gds = 7 0
purpose = metal
[layer]
name = via
gds = 8 0
purpose = via
[layer]
name = act
gds = 1 0
purpose = diff
[layer]
name = po
gds = 5 0
purpose = poly
[rule]
kind = min_width
layer = m1
value = 0.07
[rule]
kind = min_spacing
layer = m1
value = 0.07
[rule]
kind = min_area
layer = m1
value = 0.01
[rule]
kind = enclosure
layer = m1
layer_b = via
value = 0.005
[rule]
kind = extension
layer = po
layer_b = act
value = 0.07
)";

const Technology& tech() {
  static Technology t = load_tech(kTech);
  return t;
}

constexpr GdsLayer M1{7, 0}, VIA{8, 0}, ACT{1, 0}, PO{5, 0};

std::vector<Violation> check(const std::vector<Shape>& shapes) { return run_drc(shapes, tech()); }

size_t count(const std::vector<Violation>& v, RuleKind k) {
  return static_cast<size_t>(std::count_if(v.begin(), v.end(), [&](const auto& x) { return x.kind == k; }));
}

}  // namespace

TEST(Drc, CleanLayoutHasNoViolations) {
  EXPECT_TRUE(check({{M1, {0, 0, 200, 100}}, {M1, {270, 0, 470, 100}}, {VIA, {10, 10, 80, 80}}}).empty());
}

TEST(Drc, WidthViolation) {
  auto v = check({{M1, {0, 0, 69, 500}}});
  EXPECT_EQ(count(v, RuleKind::MIN_WIDTH), 1u);
}

TEST(Drc, SpacingIsEuclideanAtCorners) {
  // diagonal gap of (60,60) -> 84.8 nm is legal; (40,40) -> 56.6 nm is not
  EXPECT_EQ(count(check({{M1, {0, 0, 100, 100}}, {M1, {160, 160, 260, 260}}}), RuleKind::MIN_SPACING), 0u);
  EXPECT_EQ(count(check({{M1, {0, 0, 100, 100}}, {M1, {140, 140, 240, 240}}}), RuleKind::MIN_SPACING), 1u);
}

TEST(Drc, TouchingShapesFormOneComponent) {
  // an L of two abutting rectangles next to a third that is connected through them
  auto v = check({{M1, {0, 0, 100, 100}}, {M1, {100, 0, 200, 100}}, {M1, {150, 100, 250, 200}}});
  EXPECT_EQ(count(v, RuleKind::MIN_SPACING), 0u);
}

TEST(Drc, MinAreaUsesUnion) {
  EXPECT_EQ(count(check({{M1, {0, 0, 80, 80}}}), RuleKind::MIN_AREA), 1u);
  EXPECT_EQ(count(check({{M1, {0, 0, 80, 80}}, {M1, {80, 0, 160, 80}}}), RuleKind::MIN_AREA), 0u);
}

TEST(Drc, EnclosureAcrossSeveralOuterRects) {
  EXPECT_EQ(count(check({{M1, {0, 0, 100, 100}}, {VIA, {2, 10, 72, 80}}}), RuleKind::ENCLOSURE), 1u);
  EXPECT_EQ(count(check({{M1, {0, 0, 50, 100}}, {M1, {50, 0, 100, 100}}, {VIA, {10, 10, 80, 80}}}),
                  RuleKind::ENCLOSURE),
            0u);
}

TEST(Drc, ExtensionBothSidesAndEndingInside) {
  Rect act{0, 0, 300, 200};
  EXPECT_EQ(count(check({{ACT, act}, {PO, {100, -70, 150, 270}}}), RuleKind::EXTENSION), 0u);
  EXPECT_EQ(count(check({{ACT, act}, {PO, {100, -70, 150, 260}}}), RuleKind::EXTENSION), 1u);
  EXPECT_EQ(count(check({{ACT, act}, {PO, {100, -70, 150, 100}}}), RuleKind::EXTENSION), 1u);
  EXPECT_EQ(count(check({{ACT, act}, {PO, {-70, 50, 370, 100}}}), RuleKind::EXTENSION), 0u);
}

// Brute-force pairwise spacing oracle on random layouts.
TEST(Drc, SpacingMatchesPairwiseOracle) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> pos(0, 3000), len(70, 400);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Shape> shapes;
    std::vector<Rect> rects;
    for (int i = 0; i < 30; ++i) {
      int x = pos(rng), y = pos(rng);
      Rect r{x, y, x + len(rng), y + len(rng)};
      shapes.push_back({M1, r});
      rects.push_back(r);
    }
    std::sort(rects.begin(), rects.end());
    rects.erase(std::unique(rects.begin(), rects.end()), rects.end());
    size_t n = rects.size();
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (rects[i].touches(rects[j]) && comp[i] != comp[j]) {
            int m = std::min(comp[i], comp[j]);
            comp[i] = comp[j] = m;
            changed = true;
          }
    }
    size_t expect = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        if (comp[i] == comp[j]) continue;
        double dx = std::max({0, rects[i].x0 - rects[j].x1, rects[j].x0 - rects[i].x1});
        double dy = std::max({0, rects[i].y0 - rects[j].y1, rects[j].y0 - rects[i].y1});
        if (std::hypot(dx, dy) < 70) ++expect;
      }
    EXPECT_EQ(count(check(shapes), RuleKind::MIN_SPACING), expect) << trial;
  }
}

TEST(Drc, UnionAreaMatchesPixelCount) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pos(0, 40), len(1, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rect> rects;
    std::vector<std::vector<bool>> grid(64, std::vector<bool>(64));
    for (int i = 0; i < 8; ++i) {
      int x = pos(rng), y = pos(rng);
      Rect r{x, y, x + len(rng), y + len(rng)};
      rects.push_back(r);
      for (int a = r.x0; a < r.x1; ++a)
        for (int b = r.y0; b < r.y1; ++b) grid[a][b] = true;
    }
    int64_t pixels = 0;
    for (auto& row : grid) pixels += std::count(row.begin(), row.end(), true);
    EXPECT_EQ(detail::union_area(rects), pixels);
  }
}
