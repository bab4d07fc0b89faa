#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "gcram/dse.hpp"
#include "test_util.hpp"

using namespace gcram;
using testutil::tech;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<WorkloadRequirement> fixture() { return load_workloads(slurp(std::string(GCRAM_DATA_DIR) + "/workloads.csv")); }

const ShmooResult& default_result() {
  static ShmooResult r = shmoo(make_grid(default_shapes(), MemoryConfig{}), fixture(), tech());
  return r;
}

bool same(const ShmooResult& a, const ShmooResult& b) {
  if (a.grid != b.grid || a.configs != b.configs || a.tasks != b.tasks) return false;
  for (size_t i = 0; i < a.metrics.size(); ++i) {
    if (to_csv_row(a.metrics[i].report) != to_csv_row(b.metrics[i].report)) return false;
    if (a.metrics[i].retention != b.metrics[i].retention) return false;
  }
  return true;
}

}  // namespace

TEST(Workloads, FixtureParses) {
  auto ws = fixture();
  ASSERT_EQ(ws.size(), 14u);
  EXPECT_EQ(ws[2].task_id, 3);
  EXPECT_EQ(ws[2].name, "llama-3.2-1b");
  EXPECT_EQ(ws[2].cache_level, CacheLevel::L1);
  EXPECT_EQ(ws[13].cache_level, CacheLevel::L2);
  EXPECT_EQ(load_workloads(workloads_to_csv(ws)), ws);
}

TEST(Workloads, Errors) {
  std::string h = std::string(kWorkloadHeader) + "\n";
  EXPECT_TRUE(load_workloads(h).empty());
  try {
    load_workloads(h + "1,a,L1,1e9,1e-6\n2,b,L1,-5,1e-6\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(load_workloads(h + "1,a,L3,1,1\n"), ParseError);
  EXPECT_THROW(load_workloads(h + "1,a,L1,1\n"), ParseError);
  EXPECT_THROW(load_workloads(h + "x,a,L1,1,1\n"), ParseError);
  EXPECT_THROW(load_workloads(h + "1,a,L1,1,-1\n"), ParseError);
  EXPECT_THROW(load_workloads("id,name\n"), ParseError);
  EXPECT_EQ(load_workloads(h + "1,a,L2,0,inf\n")[0].lifetime_req, std::numeric_limits<double>::infinity());
}

TEST(Dse, VacuousRequirementsPass) {
  WorkloadRequirement w{1, "t", CacheLevel::L1, 0, 0};
  for (auto v : {CellVariant::SI_SI_NN, CellVariant::OS_OS, CellVariant::SRAM_6T})
    EXPECT_EQ(evaluate(testutil::config(16, 16, v), w, tech()), Verdict::PASS);
}

TEST(Dse, UnboundedLifetime) {
  WorkloadRequirement w{1, "t", CacheLevel::L1, 0, std::numeric_limits<double>::infinity()};
  for (auto v : {CellVariant::SI_SI_NN, CellVariant::SI_SI_NP, CellVariant::OS_OS})
    EXPECT_EQ(evaluate(testutil::config(16, 16, v), w, tech()), Verdict::FAIL_RETENTION);
  EXPECT_EQ(evaluate(testutil::config(16, 16, CellVariant::SRAM_6T), w, tech()), Verdict::PASS);
  w.f_read_req = 1e15;
  EXPECT_EQ(evaluate(testutil::config(16, 16, CellVariant::SI_SI_NN), w, tech()), Verdict::FAIL_BOTH);
  w.lifetime_req = 0;
  EXPECT_EQ(evaluate(testutil::config(16, 16, CellVariant::SI_SI_NN), w, tech()), Verdict::FAIL_FREQ);
}

TEST(Dse, DefaultGridSpan) {
  auto s = default_shapes();
  ASSERT_EQ(s.size(), 16u);
  EXPECT_EQ(s.front(), std::make_pair(16, 16));
  EXPECT_EQ(s.back(), std::make_pair(128, 128));
  for (size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i - 1].first * s[i - 1].second, s[i].first * s[i].second);
}

TEST(Dse, GridSizeAndTaskIndependence) {
  auto cfgs = make_grid({{16, 16}, {32, 16}, {16, 32}, {32, 32}}, MemoryConfig{});
  auto ws = fixture();
  auto two = shmoo(cfgs, {ws[0], ws[7]}, tech());
  ASSERT_EQ(two.grid.size(), 4u);
  for (const auto& row : two.grid) EXPECT_EQ(row.size(), 2u);
  auto three = shmoo(cfgs, {ws[0], ws[7], ws[13]}, tech());
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(three.grid[i][0], two.grid[i][0]);
    EXPECT_EQ(three.grid[i][1], two.grid[i][1]);
  }
}

TEST(Dse, DeterministicUnderAnySchedule) {
  auto cfgs = make_grid(default_shapes(), MemoryConfig{});
  const auto& ref = default_result();
  for (unsigned threads : {1u, 3u, 8u}) EXPECT_TRUE(same(shmoo(cfgs, fixture(), tech(), threads), ref)) << threads;
  // reversed config order gives the same cells
  std::vector<MemoryConfig> rev(cfgs.rbegin(), cfgs.rend());
  auto r = shmoo(rev, fixture(), tech(), 5);
  for (size_t i = 0; i < cfgs.size(); ++i) EXPECT_EQ(r.grid[cfgs.size() - 1 - i], ref.grid[i]);
}

TEST(Dse, GridMatchesRecomputation) {
  const auto& r = default_result();
  for (size_t i = 0; i < r.configs.size(); ++i) {
    auto m = measure(r.configs[i], tech());
    for (size_t j = 0; j < r.tasks.size(); ++j) {
      const auto& w = r.tasks[j];
      bool f = m.report.f_max >= w.f_read_req, t = m.retention >= w.lifetime_req;
      Verdict expect = f && t ? Verdict::PASS : f ? Verdict::FAIL_RETENTION : t ? Verdict::FAIL_FREQ : Verdict::FAIL_BOTH;
      EXPECT_EQ(r.grid[i][j], expect);
    }
  }
}

TEST(Dse, FixtureHasPassesAndFailures) {
  const auto& r = default_result();
  std::map<Verdict, int> count;
  for (const auto& row : r.grid)
    for (auto v : row) ++count[v];
  EXPECT_GT(count[Verdict::PASS], 0);
  EXPECT_GT(count[Verdict::FAIL_FREQ], 0);
  EXPECT_GT(count[Verdict::FAIL_RETENTION] + count[Verdict::FAIL_BOTH], 0);
}

TEST(Dse, SelectOptimalIsBruteForceArgmax) {
  const auto& r = default_result();
  for (size_t j = 0; j < r.tasks.size(); ++j) {
    std::optional<size_t> best;
    for (size_t i = 0; i < r.configs.size(); ++i) {
      if (r.grid[i][j] != Verdict::PASS) continue;
      auto key = [&](size_t k) {
        return std::make_tuple(r.configs[k].bits(), r.metrics[k].report.bw_read, -r.metrics[k].report.area_total);
      };
      if (!best || key(i) > key(*best)) best = i;
    }
    auto got = select_optimal(r, j);
    ASSERT_EQ(got.has_value(), best.has_value()) << j;
    if (got) EXPECT_EQ(r.configs[*got], r.configs[*best]) << j;
  }
}

TEST(Dse, SelectOptimalPermutationInvariant) {
  const auto& r = default_result();
  std::mt19937 rng(11);
  std::vector<size_t> perm(r.configs.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  ShmooResult p = r;
  for (size_t i = 0; i < perm.size(); ++i) {
    p.configs[i] = r.configs[perm[i]];
    p.metrics[i] = r.metrics[perm[i]];
    p.grid[i] = r.grid[perm[i]];
  }
  for (size_t j = 0; j < r.tasks.size(); ++j) {
    auto a = select_optimal(r, j), b = select_optimal(p, j);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_EQ(r.configs[*a], p.configs[*b]);
  }
}

TEST(Dse, SelectOptimalEdgeCases) {
  auto r = default_result();
  for (auto& row : r.grid) row[0] = Verdict::FAIL_FREQ;
  EXPECT_FALSE(select_optimal(r, 0).has_value());
  r.grid[3][0] = Verdict::PASS;
  EXPECT_EQ(select_optimal(r, 0), 3u);
}

TEST(Dse, PassRegionMonotoneUnderRelaxation) {
  const auto& r = default_result();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> lf(8.5, 10.0), ll(-8, -4), shrink(0, 1);
  for (int k = 0; k < 50; ++k) {
    WorkloadRequirement strict{1, "s", CacheLevel::L1, std::pow(10.0, lf(rng)), std::pow(10.0, ll(rng))};
    auto relaxed = strict;
    relaxed.f_read_req *= shrink(rng);
    relaxed.lifetime_req *= shrink(rng);
    for (const auto& m : r.metrics)
      if (evaluate(m, strict) == Verdict::PASS) EXPECT_EQ(evaluate(m, relaxed), Verdict::PASS);
  }
}

TEST(Dse, CsvRows) {
  const auto& r = default_result();
  auto csv = shmoo_to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(r.configs.size() * r.tasks.size() + 1));
}
