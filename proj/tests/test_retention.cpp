#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gcram/retention.hpp"
#include "test_util.hpp"

using namespace gcram;
using testutil::tech;

namespace {

RetentionSetup setup(CellVariant v, bool ls = false, double vt_offset = 0) {
  MemoryConfig c;
  c.cell_variant = v;
  c.wwl_level_shifter = ls;
  c.write_vt_offset = vt_offset;
  return make_retention_setup(c, tech());
}

// closed form for a '1' draining at the zero-bias off current
double linear_decay_time(const RetentionSetup& s) {
  auto m = shift_vt(tech().device(s.spec.write_device), s.config.write_vt_offset);
  double i = m.ioff_per_um * tech().params.gc_write_w;
  return s.c_sn * (after_wwl_coupling(s) - s.sense_threshold) / i;
}

}  // namespace

TEST(Retention, LinearDecayMatchesClosedForm) {
  auto s = setup(CellVariant::SI_SI_NN);
  double i = tech().device("nmos").ioff_per_um * tech().params.gc_write_w;
  double v0 = after_wwl_coupling(s);
  auto tr = simulate_decay(s, 2e-6);
  ASSERT_GT(tr.times.size(), 2u);
  for (size_t k = 0; k < tr.times.size(); ++k) {
    double oracle = v0 - i / s.c_sn * tr.times[k];
    EXPECT_LT(std::abs(tr.v_sn[k] - oracle) / oracle, 0.01) << tr.times[k];
  }
  EXPECT_LT(std::abs(retention_time(s).t_one - linear_decay_time(s)) / linear_decay_time(s), 0.01);
}

TEST(Retention, ZeroLeakageIsFlat) {
  auto s = setup(CellVariant::SI_SI_NN);
  Technology t = tech();
  t.devices.at("nmos").ioff_per_um = 0;
  s.tech = &t;
  auto tr = simulate_decay(s, 1e-3);
  for (double v : tr.v_sn) EXPECT_DOUBLE_EQ(v, tr.v_sn.front());
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_NEAR(tr.events[0].dv, -s.coupling_ratio_wwl * s.config.vdd, 1e-15);
}

TEST(Retention, TraceShape) {
  auto s = setup(CellVariant::SI_SI_NN);
  auto tr = simulate_decay(s, 1e-5);
  ASSERT_EQ(tr.times.size(), tr.v_sn.size());
  for (size_t k = 1; k < tr.times.size(); ++k) {
    EXPECT_GT(tr.times[k], tr.times[k - 1]);
    EXPECT_LE(tr.v_sn[k], tr.v_sn[k - 1]);
  }
  EXPECT_DOUBLE_EQ(tr.times.back(), 1e-5);
  auto z = setup(CellVariant::SI_SI_NN);
  z.stored_state = StoredState::ZERO;
  z.wbl_hold_level = z.config.vdd;
  auto tz = simulate_decay(z, 1e-3);
  for (size_t k = 1; k < tz.times.size(); ++k) EXPECT_GE(tz.v_sn[k], tz.v_sn[k - 1]);
}

TEST(Retention, InitialLevels) {
  auto s = setup(CellVariant::SI_SI_NN);
  EXPECT_NEAR(initial_level(s), 1.1 - 0.43, 1e-12);
  auto ls = setup(CellVariant::SI_SI_NN, true);
  EXPECT_GT(initial_level(ls), initial_level(s));
  s.stored_state = StoredState::ZERO;
  EXPECT_EQ(initial_level(s), 0.0);
}

TEST(Retention, ReadDisturbSign) {
  auto nn = setup(CellVariant::SI_SI_NN);
  auto tr = apply_read_disturb(simulate_decay(nn, 1e-6), nn);
  EXPECT_LT(tr.events.back().dv, 0);
  EXPECT_NEAR(tr.events.back().dv, -nn.coupling_ratio_rwl * 1.1, 1e-12);
  EXPECT_GT(tr.times.back(), tr.times[tr.times.size() - 2]);

  auto np = setup(CellVariant::SI_SI_NP);
  auto tp = apply_read_disturb(simulate_decay(np, 1e-6), np);
  EXPECT_GT(tp.events.back().dv, 0);

  auto base = simulate_decay(nn, 1e-6);
  nn.coupling_ratio_rwl = 0;
  auto same = apply_read_disturb(base, nn);
  EXPECT_EQ(same.v_sn, base.v_sn);
  EXPECT_EQ(same.times, base.times);
}

TEST(Retention, ReadDisturbClampsAtVdd) {
  auto np = setup(CellVariant::SI_SI_NP);
  DecayTrace tr{{0.0}, {1.09}, {}};
  auto out = apply_read_disturb(tr, np);
  EXPECT_DOUBLE_EQ(out.v_sn.back(), np.config.vdd);
}

TEST(Retention, SiSiMicrosecondsLimitedByOne) {
  auto r = retention_time(setup(CellVariant::SI_SI_NN));
  EXPECT_GE(r.seconds, 1e-6);
  EXPECT_LE(r.seconds, 1e-3);
  EXPECT_EQ(r.limiting, StoredState::ONE);
}

TEST(Retention, OsFarLongerThanSi) {
  double si = retention_time(setup(CellVariant::SI_SI_NN)).seconds;
  double os = retention_time(setup(CellVariant::OS_OS)).seconds;
  EXPECT_GE(os, 1000 * si);
  EXPECT_GE(os, 1e-3);
  auto s = setup(CellVariant::OS_OS);
  auto tr = simulate_decay(s, 1e-3);
  double margin0 = tr.v_sn.front() - s.sense_threshold;
  EXPECT_GT(tr.v_sn.back() - s.sense_threshold, 0.9 * margin0);
}

TEST(Retention, OsHighVt) {
  double t = os_high_vt_check(tech());
  EXPECT_TRUE(std::isfinite(t));
  EXPECT_GT(t, 10);
  double t4 = retention_time(setup(CellVariant::OS_OS, false, 0.4)).seconds;
  double ss = tech().device("nmos_os").ss;
  EXPECT_NEAR(t4 / t, std::pow(10.0, 0.1 / ss), 0.01 * std::pow(10.0, 0.1 / ss));
}

TEST(Retention, VtSlopeMatchesSubthresholdSwing) {
  auto s = setup(CellVariant::SI_SI_NN);
  auto curve = retention_curve(s, {0.0, 0.1});
  double slope = (std::log10(curve[1].second) - std::log10(curve[0].second)) / 0.1;
  double ss = tech().device("nmos").ss;
  EXPECT_LT(std::abs(slope * ss - 1), 0.1);
}

TEST(Retention, CurveMonotoneAndLevelShifterDominates) {
  std::vector<double> vts = {-0.1, -0.05, 0.0, 0.05, 0.1};
  auto off = retention_curve(setup(CellVariant::SI_SI_NN), vts);
  auto on = retention_curve(setup(CellVariant::SI_SI_NN, true), vts);
  ASSERT_EQ(off.size(), 5u);
  for (size_t i = 0; i < vts.size(); ++i) {
    if (i) EXPECT_GT(off[i].second, off[i - 1].second);
    EXPECT_GT(on[i].second, off[i].second);
  }
  EXPECT_TRUE(retention_curve(setup(CellVariant::SI_SI_NN), {}).empty());
}

TEST(Retention, DoublingCapacitanceDoublesRetention) {
  auto s = setup(CellVariant::SI_SI_NN);
  double t1 = retention_time(s).seconds;
  s.c_sn *= 2;
  EXPECT_NEAR(retention_time(s).seconds / t1, 2.0, 1e-3);
}

TEST(Retention, GateLeakageShortensRetention) {
  auto s = setup(CellVariant::OS_OS);
  double base = retention_time(s).seconds;
  s.gate_leak_per_um = 1e-18;
  EXPECT_LT(retention_time(s).seconds, base);
}

TEST(Retention, InvalidSetup) {
  auto s = setup(CellVariant::SI_SI_NN);
  s.coupling_ratio_wwl = 0.6;
  EXPECT_THROW(simulate_decay(s, 1e-6), std::invalid_argument);
  s = setup(CellVariant::SI_SI_NN);
  s.c_sn = 0;
  EXPECT_THROW(retention_time(s), std::invalid_argument);
  EXPECT_THROW(simulate_decay(setup(CellVariant::SI_SI_NN), 0), std::invalid_argument);
  MemoryConfig c;
  c.cell_variant = CellVariant::SRAM_6T;
  EXPECT_THROW(make_retention_setup(c, tech()), std::invalid_argument);
}

TEST(Retention, CsvExport) {
  auto tr = simulate_decay(setup(CellVariant::SI_SI_NN), 1e-6);
  auto csv = trace_to_csv(tr);
  EXPECT_EQ(csv.rfind("time_s,v_sn_v\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(tr.times.size() + 1));
  auto txt = trace_to_text(tr);
  EXPECT_EQ(std::count(txt.begin(), txt.end(), '\n'), static_cast<long>(tr.times.size()));
}
