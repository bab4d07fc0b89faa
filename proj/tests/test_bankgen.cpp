#include <gtest/gtest.h>

#include <set>

#include "gcram/bankgen.hpp"
#include "test_util.hpp"

using namespace gcram;
using testutil::config;
using testutil::tech;

namespace {

const CellVariant kVariants[] = {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP, CellVariant::OS_OS,
                                 CellVariant::SRAM_6T};

}  // namespace

TEST(Decoder, OneHotOverAllInputs) {
  for (int k = 0; k <= 6; ++k) {
    CellLibrary cells;
    auto dec = build_decoder(k, cells, tech());
    auto lib = cells.circuits();
    lib.emplace(dec.name, dec);
    EXPECT_TRUE(connectivity_check(dec, lib).empty()) << k;
    auto flat = flatten(dec, lib);
    SwitchSim sim(flat, testutil::is_pmos);
    for (int x = 0; x < (1 << k); ++x) {
      std::map<std::string, bool> in;
      for (int i = 0; i < k; ++i) in[text::bus("a", i)] = (x >> i) & 1;
      auto v = sim.evaluate(in);
      for (int j = 0; j < (1 << k); ++j) {
        auto out = v.at(text::bus("dec", j));
        ASSERT_TRUE(out.has_value()) << "k=" << k << " x=" << x << " j=" << j;
        EXPECT_EQ(*out, j == x) << "k=" << k << " x=" << x << " j=" << j;
      }
    }
  }
}

TEST(Decoder, PortCounts) {
  CellLibrary cells;
  auto d2 = build_decoder(2, cells, tech());
  EXPECT_EQ(d2.ports.size(), 2u + 4u + 2u);
  auto d0 = build_decoder(0, cells, tech());
  EXPECT_EQ(d0.ports, (std::vector<std::string>{"dec[0]", "vdd", "gnd"}));
}

TEST(LogicalEffort, TextbookCase) {
  const auto& t = tech();
  auto d = size_driver(64 * t.unit_inverter_cap(), t);
  EXPECT_EQ(d.stages, 3);
  EXPECT_NEAR(d.stage_effort, 4.0, 1e-9);
  EXPECT_NEAR(d.modeled_delay, t.le.tau * (12 + 3 * t.le.p_inv), 1e-18);
  for (size_t i = 1; i < d.widths.size(); ++i) EXPECT_NEAR(d.widths[i] / d.widths[i - 1], 4.0, 1e-9);
}

TEST(LogicalEffort, UnitLoad) {
  const auto& t = tech();
  auto d = size_driver(t.unit_inverter_cap(), t);
  EXPECT_EQ(d.stages, 1);
  EXPECT_NEAR(d.stage_effort, 1.0, 1e-12);
  EXPECT_EQ(size_driver(t.unit_inverter_cap(), t, Parity::NON_INVERTING).stages, 2);
}

TEST(LogicalEffort, WithinTenPercentOfExhaustiveMinimum) {
  const auto& t = tech();
  for (int h = 2; h <= 1024; ++h) {
    double best = 1e30;
    for (int n = 1; n <= 8; ++n) best = std::min(best, chain_delay(h, n, t.le));
    auto d = size_driver(h * t.unit_inverter_cap(), t);
    EXPECT_LE(d.modeled_delay, 1.1 * best) << h;
    EXPECT_GE(d.stages, 1);
  }
}

TEST(LogicalEffort, ParityIsHonoured) {
  const auto& t = tech();
  for (int h : {1, 3, 16, 50, 200, 900}) {
    EXPECT_EQ(size_driver(h * t.unit_inverter_cap(), t, Parity::INVERTING).stages % 2, 1) << h;
    EXPECT_EQ(size_driver(h * t.unit_inverter_cap(), t, Parity::NON_INVERTING).stages % 2, 0) << h;
  }
}

TEST(LogicalEffort, ElmoreMatchesDoubleSum) {
  std::vector<std::pair<double, double>> seg = {{10, 1e-15}, {20, 2e-15}, {5, 0.5e-15}, {40, 3e-15}};
  double oracle = 0;
  for (size_t i = 0; i < seg.size(); ++i)
    for (size_t j = i; j < seg.size(); ++j) oracle += seg[i].first * seg[j].second;
  EXPECT_NEAR(elmore_delay(seg), oracle, 1e-24);
  // distributed RC tends to RC/2
  EXPECT_NEAR(elmore_delay(uniform_ladder(1000, 1e-12, 1000)), 0.5e-9, 1e-12);
}

TEST(DelayChain, FloorAndBound) {
  const auto& t = tech();
  CellLibrary cells;
  EXPECT_EQ(build_delay_chain(0, cells, t).second, 2);
  for (double target : {1e-12, 5e-11, 3e-10, 1e-9}) {
    int n = build_delay_chain(target, cells, t).second;
    EXPECT_EQ(n % 2, 0);
    EXPECT_GE(delay_chain_delay(n, t), target);
    if (n > 2) EXPECT_LT(delay_chain_delay(n - 2, t), target);
  }
}

TEST(DelayChain, MonotoneInWords) {
  for (auto v : kVariants) {
    int prev = 0;
    for (int words = 8; words <= 2048; words *= 2) {
      auto d = assemble_bank(config(32, words, v), tech());
      EXPECT_GE(d.delay_chain_stages, prev) << to_string(v) << " " << words;
      prev = d.delay_chain_stages;
    }
  }
}

TEST(Bank, ConnectivityAcrossVariantsAndSizes) {
  for (auto v : kVariants)
    for (int words : {8, 32, 128, 512})
      for (bool ls : {false, true}) {
        if (ls && v == CellVariant::SRAM_6T) continue;
        auto d = assemble_bank(config(32, words, v, ls), tech());
        auto f = connectivity_check(d.top, d.circuits());
        EXPECT_TRUE(f.empty()) << d.top.name << ": " << (f.empty() ? "" : f.front().message) << " in "
                               << (f.empty() ? "" : f.front().subckt);
      }
}

TEST(Bank, ArrayDeviceCount) {
  for (auto v : kVariants) {
    auto d = assemble_bank(config(16, 64, v), tech());
    auto lib = d.circuits();
    long long per = v == CellVariant::SRAM_6T ? 6 : 2;
    EXPECT_EQ(count_devices(d.blocks.at("bitcell_array"), lib), per * 16 * 64);
    auto flat = flatten(d.blocks.at("bitcell_array"), lib);
    EXPECT_EQ(static_cast<long long>(flat.devices.size()), per * 16 * 64);
  }
}

TEST(Bank, Deterministic) {
  auto a = assemble_bank(config(32, 64, CellVariant::SI_SI_NN, true), tech());
  auto b = assemble_bank(config(32, 64, CellVariant::SI_SI_NN, true), tech());
  EXPECT_EQ(a.spice(), b.spice());
  EXPECT_EQ(a.sizing_report, b.sizing_report);
}

TEST(Bank, GainCellBlockList) {
  auto d = assemble_bank(config(32, 32, CellVariant::SI_SI_NN), tech());
  std::set<std::string> got;
  for (const auto& i : d.top.instances) got.insert(i.subckt);
  std::set<std::string> want = {"bitcell_array",  "write_port_address", "read_port_address", "write_port_data",
                                "read_port_data", "write_control",      "read_control"};
  EXPECT_EQ(got, want);
  for (const auto& s : d.slots)
    if (s.instance == "write_port_address") EXPECT_EQ(s.col, 0);
  // 32x32 bank: 32 rows of 32 cells
  EXPECT_EQ(d.geometry.rows * d.geometry.cols, 1024);
}

TEST(Bank, ConditionerPerVariant) {
  auto uses = [](const BankDesign& d, const std::string& cell) {
    for (const auto& i : d.blocks.at("read_port_data").instances)
      if (i.subckt == cell) return true;
    return false;
  };
  auto os = assemble_bank(config(32, 32, CellVariant::OS_OS), tech());
  EXPECT_TRUE(uses(os, "precharge"));
  EXPECT_FALSE(uses(os, "predischarge"));
  auto nn = assemble_bank(config(32, 32, CellVariant::SI_SI_NN), tech());
  EXPECT_TRUE(uses(nn, "predischarge"));
  // the predischarge enable comes from pc_en_b through an added inverter
  const Instance* inv = nullptr;
  for (const auto& i : nn.blocks.at("read_port_data").instances)
    if (i.name == "pc_inv") inv = &i;
  ASSERT_NE(inv, nullptr);
  EXPECT_EQ(inv->connections[0], "pc_en_b");
  EXPECT_EQ(inv->connections[1], "pc_en");
  EXPECT_EQ(nn.blocks.at(inv->subckt).instances.size() % 2, 1u);
}

TEST(Bank, PinMapCoversInterface) {
  auto d = assemble_bank(config(8, 16, CellVariant::SI_SI_NN, true), tech());
  for (const auto& p : d.top.ports) EXPECT_TRUE(d.pin_map.count(p)) << p;
  EXPECT_EQ(d.pin_map.at("clk_r"), PinRole::CLOCK);
  EXPECT_EQ(d.pin_map.at("clk_w"), PinRole::CLOCK);
  EXPECT_EQ(d.pin_map.at("web"), PinRole::ENABLE);
  EXPECT_EQ(d.pin_map.at("reb"), PinRole::ENABLE);
  EXPECT_EQ(d.pin_map.at("vwwl"), PinRole::SUPPLY);
  EXPECT_EQ(d.pin_map.at("dout[7]"), PinRole::DATA_OUT);
}

TEST(Bank, DualPortIsolation) {
  for (auto v : {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP, CellVariant::OS_OS}) {
    auto d = assemble_bank(config(8, 64, v, true), tech());
    auto flat = flatten(d.top, d.circuits());
    auto side = [](const std::string& dev) -> int {
      auto top = dev.substr(0, dev.find('.'));
      if (top.rfind("write_", 0) == 0) return 1;
      if (top.rfind("read_", 0) == 0) return 2;
      return 0;
    };
    std::map<std::string, int> touched;
    for (const auto& dev : flat.devices) {
      int s = side(dev.name);
      if (s == 0) {
        // array cell: write device on wwl/wbl, read device on rwl/rbl
        const auto& g = dev.terminals[1];
        bool write_dev = g.rfind("wwl", 0) == 0;
        s = write_dev ? 1 : 2;
      }
      for (const auto& t : dev.terminals) touched[t] |= s;
    }
    for (const auto& [net, mask] : touched) {
      if (mask != 3) continue;
      bool ok = is_supply_net(net) || net.size() > 3 && net.substr(net.size() - 3) == ".sn";
      EXPECT_TRUE(ok) << to_string(v) << " shares " << net;
    }
  }
}
