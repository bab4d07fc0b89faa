#include <gtest/gtest.h>

#include <cmath>

#include "gcram/technology.hpp"

using namespace gcram;

namespace {

const Technology& tech() {
  static Technology t = load_tech_file(std::string(GCRAM_DATA_DIR) + "/generic45.tech");
  return t;
}

int error_line(const std::string& text) {
  try {
    load_tech(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Technology, LoadsBundledFile) {
  const auto& t = tech();
  EXPECT_EQ(t.name, "generic45");
  EXPECT_EQ(t.dbu_per_um, 1000);
  EXPECT_EQ(t.layer("metal1").gds, (GdsLayer{7, 0}));
  EXPECT_EQ(t.device("nmos_os").channel, Channel::NMOS_OS);
  EXPECT_GT(t.device("nmos").ioff_per_um / t.device("nmos_os").ioff_per_um, 1e6);
  EXPECT_TRUE(t.device("pmos").is_pmos());
  EXPECT_EQ(t.to_dbu(0.07), 70);
}

TEST(Technology, TextRoundTrip) {
  auto again = load_tech(to_text(tech()));
  EXPECT_EQ(again, tech());
}

TEST(Technology, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("name = x\n[layer]\nname = m1\ngds = 7 0\npurpose = metal\n[rule]\nkind = min_width\n"
                       "layer = m9\nvalue = 0.1\n"),
            8);
  EXPECT_EQ(error_line("name = x\n[layer]\nname = m1\ngds = 7 0\npurpose = metal\nwidth = 3\n"), 6);
  EXPECT_EQ(error_line("name = x\n[device]\nname = n\nvt0 = abc\n"), 4);
  EXPECT_EQ(error_line("name = x\n[device]\nname = n\n[device]\nname = n\n"), 4);
}

TEST(Technology, SubthresholdSlopeOutOfRangeIsRejected) {
  EXPECT_THROW(load_tech("name = x\n[device]\nname = n\nss = 0.5\n"), ParseError);
}

TEST(DeviceCurrent, SubthresholdSlopeIsOneDecadePerSs) {
  const auto& m = tech().device("nmos");
  double i1 = device_current(m, 0.0, 1.1, 1.0);
  double i2 = device_current(m, m.ss, 1.1, 1.0);
  EXPECT_NEAR(i2 / i1, 10.0, 1e-9);
  EXPECT_NEAR(i1, m.ioff_per_um * (1 - std::exp(-1.1 / thermal_voltage(300))), 1e-20);
}

TEST(DeviceCurrent, ContinuousAtThresholdAndReachesIon) {
  for (const auto& [name, m] : tech().devices) {
    double below = device_current(m, m.vt0 - 1e-9, 1.1, 1.0);
    double above = device_current(m, m.vt0, 1.1, 1.0);
    EXPECT_NEAR(below / above, 1.0, 1e-6) << name;
    EXPECT_NEAR(device_current(m, m.vdd_ref, 10.0, 2.0), 2.0 * m.ion_per_um, 1e-12) << name;
  }
}

TEST(DeviceCurrent, MonotoneInVgsAndVds) {
  const auto& m = tech().device("nmos");
  double prev = 0;
  for (double v = -0.3; v <= 1.2; v += 0.01) {
    double i = device_current(m, v, 0.5, 1.0);
    EXPECT_GT(i, prev);
    prev = i;
  }
  EXPECT_EQ(device_current(m, 0.5, 0.0, 1.0), 0.0);
  EXPECT_LT(device_current(m, 0.5, 0.01, 1.0), device_current(m, 0.5, 0.1, 1.0));
}

TEST(DeviceCurrent, TemperatureFlattensSlope) {
  const auto& m = tech().device("nmos");
  double r300 = device_current(m, -0.2, 1.0, 1.0, 300) / device_current(m, 0.0, 1.0, 1.0, 300);
  double r360 = device_current(m, -0.2, 1.0, 1.0, 360) / device_current(m, 0.0, 1.0, 1.0, 360);
  EXPECT_GT(r360, r300);
}

TEST(DeviceCurrent, ShiftVtScalesLeakage) {
  auto m = tech().device("nmos_os");
  auto s = shift_vt(m, 0.3);
  EXPECT_NEAR(device_current(m, 0, 1, 1) / device_current(s, 0, 1, 1), std::pow(10.0, 0.3 / m.ss), 1e-6);
  EXPECT_NEAR(s.vt0, m.vt0 + 0.3, 1e-12);
}
