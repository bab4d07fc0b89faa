#include <gtest/gtest.h>

#include "gcram/drc.hpp"
#include "gcram/periphery.hpp"

using namespace gcram;

namespace {

const Technology& tech() {
  static Technology t = load_tech_file(std::string(GCRAM_DATA_DIR) + "/generic45.tech");
  return t;
}

CellLibrary& all_cells() {
  static CellLibrary lib = [] {
    CellLibrary l;
    const auto& t = tech();
    for (auto v : {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP, CellVariant::OS_OS, CellVariant::SRAM_6T})
      gen_bitcell(l, v, t);
    for (auto k : {GateKind::INV, GateKind::NAND2, GateKind::NAND3, GateKind::AND2})
      for (double w : {0.2, 0.8, 5.0}) gen_gate(l, k, w, t);
    gen_tie_high(l, t);
    for (bool d : {false, true}) {
      gen_write_driver(l, t, d);
      gen_sense_amp(l, t, d);
      gen_column_mux(l, t, d);
      gen_bl_conditioner(l, Conditioning::PRECHARGE, t, d);
    }
    gen_bl_conditioner(l, Conditioning::PREDISCHARGE, t);
    gen_level_shifter(l, t);
    gen_dff(l, t);
    gen_vref_stub(l, t);
    return l;
  }();
  return lib;
}

double area(const Rect& r) { return static_cast<double>(r.area()); }

}  // namespace

TEST(Cellgen, EveryCellIsDrcClean) {
  auto layouts = all_cells().layouts();
  for (const auto& [name, cell] : layouts) {
    auto v = run_drc(cell, layouts, tech());
    EXPECT_TRUE(v.empty()) << name << ": " << v.size() << " violations, first " << (v.empty() ? "" : to_string(v[0]));
  }
}

TEST(Cellgen, EveryCellIsConnectivityClean) {
  auto circuits = all_cells().circuits();
  for (const auto& [name, c] : circuits) {
    auto f = connectivity_check(c, circuits);
    EXPECT_TRUE(f.empty()) << name << ": " << (f.empty() ? "" : f[0].message);
  }
}

TEST(Cellgen, EveryPortHasAPin) {
  for (const auto& [name, c] : all_cells().cells)
    for (const auto& p : c.circuit.ports) EXPECT_NE(c.layout.find_pin(p), nullptr) << name << " " << p;
}

TEST(Cellgen, GainCellTopology) {
  const auto& nn = all_cells().at(bitcell_name(CellVariant::SI_SI_NN)).circuit;
  ASSERT_EQ(nn.devices.size(), 2u);
  EXPECT_EQ(nn.devices[0].terminals, (std::vector<std::string>{"sn", "wwl", "wbl", "gnd"}));
  EXPECT_EQ(nn.devices[1].terminals[0], "rbl");
  EXPECT_EQ(nn.devices[1].terminals[1], "sn");
  EXPECT_EQ(nn.devices[1].terminals[2], "rwl");
  const auto& np = all_cells().at(bitcell_name(CellVariant::SI_SI_NP)).circuit;
  EXPECT_TRUE(tech().device(np.devices[1].model).is_pmos());
  const auto& os = all_cells().at(bitcell_name(CellVariant::OS_OS)).circuit;
  for (const auto& d : os.devices) EXPECT_EQ(tech().device(d.model).channel, Channel::NMOS_OS);
  EXPECT_EQ(variant_spec(CellVariant::SI_SI_NP, tech()).rwl_polarity, RwlPolarity::ACTIVE_HIGH);
  EXPECT_EQ(variant_spec(CellVariant::OS_OS, tech()).read_bl_conditioning, Conditioning::PRECHARGE);
}

TEST(Cellgen, AreaBands) {
  auto layouts = all_cells().layouts();
  auto fp = [&](CellVariant v) {
    const auto& c = layouts.at(bitcell_name(v));
    return area(silicon_footprint(c, layouts, tech()));
  };
  double sram = fp(CellVariant::SRAM_6T), si = fp(CellVariant::SI_SI_NN), os = fp(CellVariant::OS_OS);
  EXPECT_LT(os, si);
  EXPECT_LT(si, sram);
  EXPECT_GE(si / sram, 0.5);
  EXPECT_LE(si / sram, 0.85);
  EXPECT_LE(os / sram, 0.25);
  std::printf("cell areas (um^2): sram %.4f si %.4f os %.4f  si/sram %.3f os/sram %.3f\n", sram * 1e-6, si * 1e-6,
              os * 1e-6, si / sram, os / sram);
}

TEST(Cellgen, GateInputCapIsLinearInWidth) {
  for (auto k : {GateKind::INV, GateKind::NAND2, GateKind::NAND3}) {
    double c1 = gate_input_cap(k, 1.0, tech());
    EXPECT_NEAR(gate_input_cap(k, 3.0, tech()), 3 * c1, 1e-24);
  }
  const auto& inv = all_cells().at(gate_name(GateKind::INV, 0.8)).circuit;
  EXPECT_DOUBLE_EQ(inv.devices[0].w, 0.8);
  EXPECT_DOUBLE_EQ(inv.devices[1].w, 0.8 * tech().le.gamma);
}

TEST(Cellgen, WriteDriverHasNoComplementPortAndFloatsWhenDisabled) {
  CircuitLibrary circuits = all_cells().circuits();
  const auto& wd = circuits.at("write_driver");
  EXPECT_FALSE(wd.has_port("bl_b"));
  auto flat = flatten(wd, circuits);
  SwitchSim sim(flat, [&](const std::string& m) { return tech().device(m).is_pmos(); });
  for (bool din : {false, true}) {
    EXPECT_FALSE(sim.connected({{"din", din}, {"en", false}}, "wbl", "vdd"));
    EXPECT_FALSE(sim.connected({{"din", din}, {"en", false}}, "wbl", "gnd"));
    auto v = sim.evaluate({{"din", din}, {"en", true}});
    ASSERT_TRUE(v.at("wbl").has_value());
    EXPECT_EQ(*v.at("wbl"), din);
  }
}

TEST(Cellgen, DecoderGatesEvaluate) {
  CircuitLibrary circuits = all_cells().circuits();
  auto flat = flatten(circuits.at(gate_name(GateKind::AND2, 0.2)), circuits);
  SwitchSim sim(flat, [&](const std::string& m) { return tech().device(m).is_pmos(); });
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_EQ(*sim.evaluate({{"a", a == 1}, {"b", b == 1}}).at("y"), a && b);
}

TEST(Cellgen, LevelShifterAndVref) {
  const auto& ls = all_cells().at("level_shifter").circuit;
  EXPECT_EQ(ls.devices.size(), 6u);  // four core devices plus the input inverter
  const auto& vr = all_cells().at("vref_stub").circuit;
  EXPECT_EQ(vr.ports, (std::vector<std::string>{"vref", "vdd", "gnd"}));
  double top = vr.devices[0].value, bot = vr.devices[1].value;
  EXPECT_NEAR(1.1 * bot / (top + bot), 0.55, 1e-12);
}
