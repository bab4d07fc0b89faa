// SPDX-License-Identifier: Apache-2.0
//
// Design-space exploration: workload requirement tables, pass/fail grids over
// bank sizes, and selection of the best passing bank per task.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gcram/analysis.hpp"
#include "gcram/floorplan.hpp"
#include "gcram/retention.hpp"
#include "gcram/text.hpp"

namespace gcram {

enum class CacheLevel { L1, L2 };

inline std::string_view to_string(CacheLevel c) { return c == CacheLevel::L1 ? "L1" : "L2"; }

struct WorkloadRequirement {
  int task_id = 0;
  std::string name;
  CacheLevel cache_level = CacheLevel::L1;
  double f_read_req = 0;    ///< Hz
  double lifetime_req = 0;  ///< s, inf means unbounded

  bool operator==(const WorkloadRequirement&) const = default;
};

inline constexpr std::string_view kWorkloadHeader = "task_id,name,cache_level,f_read_req_hz,lifetime_req_s";

/// Parses the workload CSV. Blank lines and '#' comments are skipped.
inline std::vector<WorkloadRequirement> load_workloads(std::string_view csv) {
  std::vector<WorkloadRequirement> out;
  bool header = false;
  int lineno = 0;
  for (auto raw : text::split_lines(csv)) {
    ++lineno;
    auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    if (!header) {
      std::string h;
      for (char c : line)
        if (c != ' ' && c != '\t') h += c;
      if (h != kWorkloadHeader) throw ParseError(lineno, "expected header '" + std::string(kWorkloadHeader) + "'");
      header = true;
      continue;
    }
    auto f = text::split(line, ',');
    if (f.size() != 5) throw ParseError(lineno, "expected 5 fields, got " + std::to_string(f.size()));
    WorkloadRequirement w;
    auto id = text::to_int(f[0]);
    if (!id) throw ParseError(lineno, "malformed task_id '" + std::string(text::trim(f[0])) + "'");
    w.task_id = static_cast<int>(*id);
    w.name = std::string(text::trim(f[1]));
    if (w.name.empty()) throw ParseError(lineno, "empty task name");
    auto lvl = text::trim(f[2]);
    if (lvl == "L1" || lvl == "l1") w.cache_level = CacheLevel::L1;
    else if (lvl == "L2" || lvl == "l2") w.cache_level = CacheLevel::L2;
    else throw ParseError(lineno, "cache_level must be L1 or L2");
    auto fr = text::to_double(f[3]);
    auto lt = text::to_double(f[4]);
    if (!fr || std::isnan(*fr) || *fr < 0) throw ParseError(lineno, "f_read_req_hz must be a number >= 0");
    if (!lt || std::isnan(*lt) || *lt < 0) throw ParseError(lineno, "lifetime_req_s must be a number >= 0");
    w.f_read_req = *fr;
    w.lifetime_req = *lt;
    out.push_back(std::move(w));
  }
  if (!header) throw ParseError(0, "workload file has no header");
  return out;
}

inline std::string workloads_to_csv(const std::vector<WorkloadRequirement>& ws) {
  std::ostringstream os;
  os << kWorkloadHeader << "\n";
  for (const auto& w : ws)
    os << w.task_id << "," << w.name << "," << to_string(w.cache_level) << "," << text::exact(w.f_read_req) << ","
       << text::exact(w.lifetime_req) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

enum class Verdict { PASS, FAIL_FREQ, FAIL_RETENTION, FAIL_BOTH };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL_FREQ: return "FAIL_FREQ";
    case Verdict::FAIL_RETENTION: return "FAIL_RETENTION";
    case Verdict::FAIL_BOTH: return "FAIL_BOTH";
  }
  return "?";
}

struct ConfigMetrics {
  AnalysisReport report;
  double retention = 0;  ///< s, inf for sram
};

inline ConfigMetrics measure(const MemoryConfig& cfg, const Technology& tech) {
  ConfigMetrics m;
  auto d = build_bank(cfg, tech);
  m.report = analyze(d, tech);
  m.retention = is_gain_cell(cfg.cell_variant) ? retention_time(make_retention_setup(cfg, tech)).seconds
                                               : std::numeric_limits<double>::infinity();
  return m;
}

/// Classification from stored metrics. An unbounded lifetime only passes on sram.
inline Verdict evaluate(const ConfigMetrics& m, const WorkloadRequirement& w) {
  bool freq = m.report.f_max >= w.f_read_req;
  bool ret = std::isinf(w.lifetime_req) ? std::isinf(m.retention) : m.retention >= w.lifetime_req;
  if (freq && ret) return Verdict::PASS;
  if (ret) return Verdict::FAIL_FREQ;
  if (freq) return Verdict::FAIL_RETENTION;
  return Verdict::FAIL_BOTH;
}

inline Verdict evaluate(const MemoryConfig& cfg, const WorkloadRequirement& w, const Technology& tech) {
  return evaluate(measure(cfg, tech), w);
}

struct ShmooResult {
  std::vector<MemoryConfig> configs;
  std::vector<WorkloadRequirement> tasks;
  std::vector<std::vector<Verdict>> grid;  ///< [config][task]
  std::vector<ConfigMetrics> metrics;      ///< per config
};

/// Bank shapes word_size x num_words for every pair of sizes, one word per row.
inline std::vector<MemoryConfig> make_grid(const std::vector<std::pair<int, int>>& shapes, const MemoryConfig& base) {
  std::vector<MemoryConfig> out;
  for (auto [ws, nw] : shapes) {
    auto c = base;
    c.word_size = ws;
    c.num_words = nw;
    c.words_per_row = 1;
    out.push_back(c);
  }
  return out;
}

/// 16x16 through 128x128 in powers of two.
inline std::vector<std::pair<int, int>> default_shapes() {
  std::vector<std::pair<int, int>> s;
  for (int nw : {16, 32, 64, 128})
    for (int ws : {16, 32, 64, 128}) s.emplace_back(ws, nw);
  std::stable_sort(s.begin(), s.end(),
                   [](auto a, auto b) { return a.first * a.second < b.first * b.second; });
  return s;
}

/// Runs f(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
template <class F>
void parallel_for(size_t n, unsigned threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, n));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline ShmooResult shmoo(const std::vector<MemoryConfig>& configs, const std::vector<WorkloadRequirement>& tasks,
                         const Technology& tech, unsigned threads = 0) {
  ShmooResult r;
  r.configs = configs;
  r.tasks = tasks;
  r.metrics.resize(configs.size());
  parallel_for(configs.size(), threads, [&](size_t i) { r.metrics[i] = measure(configs[i], tech); });
  r.grid.assign(configs.size(), std::vector<Verdict>(tasks.size()));
  for (size_t i = 0; i < configs.size(); ++i)
    for (size_t j = 0; j < tasks.size(); ++j) r.grid[i][j] = evaluate(r.metrics[i], tasks[j]);
  return r;
}

namespace detail {

// true when config a beats config b: more bits, then higher read bandwidth, then smaller area
inline bool better(const ShmooResult& r, size_t a, size_t b) {
  const auto &ca = r.configs[a], &cb = r.configs[b];
  const auto &ma = r.metrics[a].report, &mb = r.metrics[b].report;
  if (ca.bits() != cb.bits()) return ca.bits() > cb.bits();
  if (ma.bw_read != mb.bw_read) return ma.bw_read > mb.bw_read;
  if (ma.area_total != mb.area_total) return ma.area_total < mb.area_total;
  return std::pair(ca.word_size, ca.num_words) < std::pair(cb.word_size, cb.num_words);
}

}  // namespace detail

/// Index of the best passing config for task column `task`, if any.
inline std::optional<size_t> select_optimal(const ShmooResult& r, size_t task) {
  std::optional<size_t> best;
  for (size_t i = 0; i < r.configs.size(); ++i) {
    if (r.grid[i][task] != Verdict::PASS) continue;
    if (!best || detail::better(r, i, *best)) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Export

inline std::string shmoo_to_csv(const ShmooResult& r) {
  std::ostringstream os;
  os << "task_id,name,cache_level,word_size,num_words,bits,f_max_hz,retention_s,verdict\n";
  for (size_t j = 0; j < r.tasks.size(); ++j)
    for (size_t i = 0; i < r.configs.size(); ++i) {
      const auto& t = r.tasks[j];
      const auto& c = r.configs[i];
      os << t.task_id << "," << t.name << "," << to_string(t.cache_level) << "," << c.word_size << ","
         << c.num_words << "," << c.bits() << "," << text::exact(r.metrics[i].report.f_max) << ","
         << text::exact(r.metrics[i].retention) << "," << to_string(r.grid[i][j]) << "\n";
    }
  return os.str();
}

}  // namespace gcram
