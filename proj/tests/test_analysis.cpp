#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gcram/analysis.hpp"
#include "gcram/floorplan.hpp"
#include "test_util.hpp"

using namespace gcram;
using testutil::config;
using testutil::tech;

namespace {

const CellVariant kVariants[] = {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP, CellVariant::OS_OS,
                                 CellVariant::SRAM_6T};

AnalysisReport report(const MemoryConfig& c) {
  auto d = build_bank(c, tech());
  return analyze(d, tech());
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Analysis, ReportInvariants) {
  for (auto v : kVariants)
    for (int words : {8, 32, 128}) {
      auto r = report(config(32, words, v));
      EXPECT_GT(r.array_efficiency, 0);
      EXPECT_LT(r.array_efficiency, 1);
      EXPECT_DOUBLE_EQ(r.f_max, 1.0 / std::max(r.t_read, r.t_write));
      EXPECT_GT(r.t_read, 0);
      EXPECT_GT(r.t_write, 0);
      EXPECT_GT(r.p_leak, 0);
      EXPECT_GT(r.e_access, 0);
      EXPECT_GE(r.bw_read, 0);
      EXPECT_GE(r.bw_write, 0);
    }
}

TEST(Analysis, Bandwidth) {
  auto g = report(config(32, 32, CellVariant::SI_SI_NN));
  EXPECT_DOUBLE_EQ(g.bw_read, 32 * g.f_max);
  EXPECT_DOUBLE_EQ(g.bw_write, 32 * g.f_max);
  auto s = report(config(32, 32, CellVariant::SRAM_6T));
  EXPECT_DOUBLE_EQ(s.bw_read, 16 * s.f_max);
  EXPECT_DOUBLE_EQ(s.bw_write, 16 * s.f_max);
}

TEST(Analysis, ElmoreTwoSegments) {
  EXPECT_NEAR(elmore_delay({{1e3, 1e-15}, {1e3, 1e-15}}), 3e-12, 1e-24);
  EXPECT_DOUBLE_EQ(elmore_delay({{2e3, 3e-15}}), 6e-12);
}

TEST(Analysis, ElmoreRandomLadder) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> r(10, 1e4), c(1e-16, 1e-14);
  std::vector<std::pair<double, double>> seg;
  for (int i = 0; i < 10; ++i) seg.push_back({r(rng), c(rng)});
  // sum over capacitors of the resistance shared with the source
  double oracle = 0;
  for (size_t j = 0; j < seg.size(); ++j) {
    double rpath = 0;
    for (size_t i = 0; i <= j; ++i) rpath += seg[i].first;
    oracle += rpath * seg[j].second;
  }
  EXPECT_NEAR(elmore_delay(seg), oracle, 1e-12 * oracle);
}

TEST(Analysis, WriteFasterThanRead) {
  for (auto v : kVariants)
    for (int words : {8, 32, 128, 512}) {
      auto r = report(config(32, words, v));
      EXPECT_LT(r.t_write, r.t_read) << r.name;
    }
  for (auto v : {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP})
    for (int words : {8, 32, 128}) {
      auto r = report(config(32, words, v, true));
      EXPECT_LT(r.t_write, r.t_read) << r.name;
    }
}

TEST(Analysis, LevelShifterSpeedsUpRead) {
  for (auto v : {CellVariant::SI_SI_NN, CellVariant::OS_OS})
    for (int words : {8, 32, 128}) {
      auto off = report(config(32, words, v, false));
      auto on = report(config(32, words, v, true));
      EXPECT_LT(on.t_read, off.t_read) << on.name;
    }
}

TEST(Analysis, ReadSlowsWithRows) {
  for (auto v : kVariants) {
    double prev = 0;
    for (int words : {8, 16, 32, 64, 128}) {
      auto c = config(32, words, v);
      c.words_per_row = 1;
      auto r = report(c);
      EXPECT_GT(r.t_read, prev) << r.name;
      prev = r.t_read;
    }
  }
}

TEST(Analysis, FmaxNonIncreasingInWords) {
  for (auto v : kVariants) {
    double prev = INFINITY;
    for (int words : {8, 32, 128, 512}) {
      auto r = report(config(32, words, v));
      EXPECT_LE(r.f_max, prev) << r.name;
      prev = r.f_max;
    }
  }
}

TEST(Analysis, SramReadsFasterThanSiSi) {
  for (int words : {8, 32, 128, 512})
    EXPECT_LT(report(config(32, words, CellVariant::SRAM_6T)).t_read,
              report(config(32, words, CellVariant::SI_SI_NN)).t_read);
}

TEST(Analysis, WrittenOneLevel) {
  const auto& t = tech();
  auto spec = variant_spec(CellVariant::SI_SI_NN, t);
  auto c = config(32, 32, CellVariant::SI_SI_NN);
  EXPECT_NEAR(written_one(c, spec, t), c.vdd - t.device(spec.write_device).vt0, 1e-12);
  c.wwl_level_shifter = true;
  double vt = t.device(spec.write_device).vt0;
  EXPECT_NEAR(written_one(c, spec, t), std::min(c.boost_voltage() - vt, c.vdd), 1e-12);
  EXPECT_GT(written_one(c, spec, t), c.vdd - vt);
}

TEST(Analysis, SramLeakageLinearInBits) {
  const auto& t = tech();
  const auto& p = t.params;
  // subthreshold off current at vgs = 0, full drain bias
  auto ioff = [&](const std::string& m, double w) {
    const auto& d = t.device(m);
    return d.ioff_per_um * w * (1 - std::exp(-1.1 / (8.617333262e-5 * 300)));
  };
  double per_cell = (ioff(p.cell_nmos, p.sram_pd_w) + ioff(p.cell_pmos, p.sram_pu_w)) * 1.1;
  for (int words : {32, 128, 512}) {
    auto d = build_bank(config(32, words, CellVariant::SRAM_6T), t);
    std::map<std::string, double> memo;
    auto lib = d.circuits();
    lib.emplace(d.top.name, d.top);
    double periphery = detail::periphery_off_current(d.top.name, lib, d.config, t, memo) * 1.1;
    double cells = leakage_power(d, t) - periphery;
    EXPECT_LT(rel(cells, per_cell * 32 * words), 1e-9) << words;
  }
}

TEST(Analysis, GainCellLeakageIsPeripheryOnly) {
  const auto& t = tech();
  auto d = build_bank(config(32, 128, CellVariant::SI_SI_NN), t);
  std::map<std::string, double> memo;
  auto lib = d.circuits();
  lib.emplace(d.top.name, d.top);
  EXPECT_DOUBLE_EQ(leakage_power(d, t), detail::periphery_off_current(d.top.name, lib, d.config, t, memo) * 1.1);
}

TEST(Analysis, GainCellLeakageFarBelowSram) {
  auto g = report(config(32, 512, CellVariant::SI_SI_NN));
  auto s = report(config(32, 512, CellVariant::SRAM_6T));
  EXPECT_LT(g.p_leak, 0.05 * s.p_leak);
}

TEST(Analysis, LevelShifterEnergyTerm) {
  const auto& t = tech();
  auto off = build_bank(config(32, 32, CellVariant::SI_SI_NN, false), t);
  auto on = build_bank(config(32, 32, CellVariant::SI_SI_NN, true), t);
  const auto& p = t.params;
  double c_wwl = off.geometry.cols * (t.device("nmos").cgate_per_um * p.gc_write_w +
                                      t.wire("metal1").c_per_um * off.cell_w_um);
  double vb = on.config.boost_voltage(), vdd = on.config.vdd;
  EXPECT_LT(rel(access_energy(on, t) - access_energy(off, t), c_wwl * (vb * vb - vdd * vdd)), 1e-9);
}

TEST(Analysis, EnergyLinearInWordSize) {
  const auto& t = tech();
  auto e = [&](int ws) {
    auto c = config(ws, 32, CellVariant::SI_SI_NN);
    c.words_per_row = 1;
    return access_energy(assemble_bank(c, t), t);
  };
  double e8 = e(8), e16 = e(16), e32 = e(32);
  EXPECT_LT(rel(e32 - e16, 2 * (e16 - e8)), 1e-9);
}

TEST(Analysis, TrendsOverBankSize) {
  std::vector<double> eff, ratio;
  for (int words : {32, 128, 512}) {
    auto g = report(config(32, words, CellVariant::SI_SI_NN));
    auto s = report(config(32, words, CellVariant::SRAM_6T));
    eff.push_back(g.array_efficiency);
    ratio.push_back(g.area_total / s.area_total);
  }
  EXPECT_LT(eff[0], eff[1]);
  EXPECT_LT(eff[1], eff[2]);
  EXPECT_GT(ratio[0], ratio[1]);
  EXPECT_GT(ratio[1], ratio[2]);
}

TEST(Analysis, TextAndCsv) {
  auto r = report(config(32, 32, CellVariant::SI_SI_NN));
  auto text = to_text(r);
  EXPECT_NE(text.find("t_read = "), std::string::npos);
  EXPECT_NE(text.find("area_total = "), std::string::npos);
  auto row = to_csv_row(r);
  auto head = csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(head.begin(), head.end(), ','));
}
