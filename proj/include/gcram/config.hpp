// SPDX-License-Identifier: Apache-2.0
//
// Memory configuration file parsing and derived bank geometry.

#pragma once

#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gcram/text.hpp"

namespace gcram {

enum class CellVariant { SI_SI_NN, SI_SI_NP, OS_OS, SRAM_6T };

inline std::string_view to_string(CellVariant v) {
  switch (v) {
    case CellVariant::SI_SI_NN: return "si_si_nn";
    case CellVariant::SI_SI_NP: return "si_si_np";
    case CellVariant::OS_OS: return "os_os";
    case CellVariant::SRAM_6T: return "sram_6t";
  }
  return "?";
}

inline std::optional<CellVariant> parse_variant(std::string_view s) {
  auto l = text::lower(text::trim(s));
  if (l == "si_si_nn") return CellVariant::SI_SI_NN;
  if (l == "si_si_np") return CellVariant::SI_SI_NP;
  if (l == "os_os") return CellVariant::OS_OS;
  if (l == "sram_6t") return CellVariant::SRAM_6T;
  return std::nullopt;
}

inline bool is_gain_cell(CellVariant v) { return v != CellVariant::SRAM_6T; }

struct MemoryConfig {
  int word_size = 0;
  int num_words = 0;
  CellVariant cell_variant = CellVariant::SI_SI_NN;
  bool wwl_level_shifter = false;
  double vdd = 1.1;
  std::optional<double> vwwl_boost;  ///< unset means vdd + 0.4
  double temperature = 300.0;
  std::optional<int> words_per_row;  ///< unset means AUTO
  double write_vt_offset = 0.0;
  std::string tech_path;

  double boost_voltage() const { return vwwl_boost.value_or(vdd + 0.4); }
  /// Level shifters only exist on gain-cell banks.
  bool level_shifted() const { return wwl_level_shifter && is_gain_cell(cell_variant); }
  long long bits() const { return static_cast<long long>(word_size) * num_words; }

  bool operator==(const MemoryConfig&) const = default;
};

struct DerivedGeometry {
  int rows = 0;
  int cols = 0;
  int addr_bits_row = 0;
  int addr_bits_col = 0;
  int words_per_row = 0;

  bool operator==(const DerivedGeometry&) const = default;
};

inline bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int ceil_log2(long long v) {
  int bits = 0;
  while ((1LL << bits) < v) ++bits;
  return bits;
}

namespace detail {

inline void validate_config(const MemoryConfig& cfg, const std::vector<int>& line_of,
                            std::vector<std::string>* warnings) {
  // line_of indices: 0 word_size, 1 num_words, 2 words_per_row, 3 vwwl_boost, 4 level shifter
  if (cfg.word_size < 1) throw ParseError(line_of[0], "word_size must be >= 1");
  if (cfg.num_words < 2) throw ParseError(line_of[1], "num_words must be >= 2");
  if (cfg.words_per_row) {
    int wpr = *cfg.words_per_row;
    if (wpr < 1) throw ParseError(line_of[2], "words_per_row must be >= 1");
    if (cfg.num_words % wpr != 0)
      throw ParseError(line_of[2], "num_words (" + std::to_string(cfg.num_words) +
                                       ") is not divisible by words_per_row (" +
                                       std::to_string(wpr) + ")");
    if (!is_pow2(cfg.num_words / wpr))
      throw ParseError(line_of[2], "words_per_row must make rows a power of two (" +
                                       std::to_string(cfg.num_words) + "/" + std::to_string(wpr) +
                                       "=" + std::to_string(cfg.num_words / wpr) + ")");
  }
  if (cfg.vdd <= 0) throw ParseError(0, "vdd must be positive");
  if (cfg.temperature <= 0) throw ParseError(0, "temperature must be positive");
  if (cfg.cell_variant == CellVariant::SRAM_6T) {
    if (warnings && cfg.wwl_level_shifter)
      warnings->push_back("sram_6t ignores wwl_level_shifter");
    if (warnings && cfg.write_vt_offset != 0.0)
      warnings->push_back("sram_6t ignores write_vt_offset");
  } else if (cfg.wwl_level_shifter && !(cfg.boost_voltage() > cfg.vdd)) {
    throw ParseError(line_of[3] ? line_of[3] : line_of[4],
                     "wwl_level_shifter requires vwwl_boost > vdd");
  }
}

}  // namespace detail

/// Parses `key = value` lines with `#` comments. Every failure carries the offending line.
inline MemoryConfig parse_config(std::string_view input, std::vector<std::string>* warnings = nullptr) {
  MemoryConfig cfg;
  std::vector<int> line_of(5, 0);
  bool have_ws = false, have_nw = false, have_variant = false, have_tech = false;
  int lineno = 0;
  for (auto raw : text::split_lines(input)) {
    ++lineno;
    auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    auto kv = text::key_value(line);
    if (!kv || kv->key.empty()) throw ParseError(lineno, "expected 'key = value'");
    auto key = kv->key;
    auto val = kv->value;
    auto need_int = [&]() {
      auto v = text::to_int(val);
      if (!v) throw ParseError(lineno, "malformed integer for " + std::string(key) + ": '" + std::string(val) + "'");
      if (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max())
        throw ParseError(lineno, "value out of range for " + std::string(key));
      return static_cast<int>(*v);
    };
    auto need_double = [&]() {
      auto v = text::to_double(val);
      if (!v || !std::isfinite(*v))
        throw ParseError(lineno, "malformed number for " + std::string(key) + ": '" + std::string(val) + "'");
      return *v;
    };
    if (key == "word_size") {
      cfg.word_size = need_int();
      have_ws = true;
      line_of[0] = lineno;
    } else if (key == "num_words") {
      cfg.num_words = need_int();
      have_nw = true;
      line_of[1] = lineno;
    } else if (key == "cell_variant") {
      auto v = parse_variant(val);
      if (!v) throw ParseError(lineno, "unknown cell_variant '" + std::string(val) + "'");
      cfg.cell_variant = *v;
      have_variant = true;
    } else if (key == "tech_path") {
      if (val.empty()) throw ParseError(lineno, "tech_path is empty");
      cfg.tech_path = std::string(val);
      have_tech = true;
    } else if (key == "wwl_level_shifter") {
      auto b = text::to_bool(val);
      if (!b) throw ParseError(lineno, "malformed boolean for wwl_level_shifter: '" + std::string(val) + "'");
      cfg.wwl_level_shifter = *b;
      line_of[4] = lineno;
    } else if (key == "vdd") {
      cfg.vdd = need_double();
      if (cfg.vdd <= 0) throw ParseError(lineno, "vdd must be positive");
    } else if (key == "vwwl_boost") {
      cfg.vwwl_boost = need_double();
      line_of[3] = lineno;
    } else if (key == "temperature") {
      cfg.temperature = need_double();
      if (cfg.temperature <= 0) throw ParseError(lineno, "temperature must be positive");
    } else if (key == "words_per_row") {
      if (text::lower(val) == "auto") {
        cfg.words_per_row.reset();
      } else {
        cfg.words_per_row = need_int();
      }
      line_of[2] = lineno;
    } else if (key == "write_vt_offset") {
      cfg.write_vt_offset = need_double();
    } else if (key == "num_banks") {
      if (need_int() != 1) throw ParseError(lineno, "num_banks must be 1 (multibank is not supported)");
    } else {
      throw ParseError(lineno, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_ws) throw ParseError(0, "missing mandatory key 'word_size'");
  if (!have_nw) throw ParseError(0, "missing mandatory key 'num_words'");
  if (!have_variant) throw ParseError(0, "missing mandatory key 'cell_variant'");
  if (!have_tech) throw ParseError(0, "missing mandatory key 'tech_path'");
  if (!line_of[2]) line_of[2] = line_of[1];
  detail::validate_config(cfg, line_of, warnings);
  return cfg;
}

inline std::string to_text(const MemoryConfig& cfg) {
  std::ostringstream os;
  os << "word_size = " << cfg.word_size << "\n";
  os << "num_words = " << cfg.num_words << "\n";
  os << "cell_variant = " << to_string(cfg.cell_variant) << "\n";
  os << "tech_path = " << cfg.tech_path << "\n";
  os << "wwl_level_shifter = " << (cfg.wwl_level_shifter ? "true" : "false") << "\n";
  os << "vdd = " << text::exact(cfg.vdd) << "\n";
  if (cfg.vwwl_boost) os << "vwwl_boost = " << text::exact(*cfg.vwwl_boost) << "\n";
  os << "temperature = " << text::exact(cfg.temperature) << "\n";
  os << "words_per_row = " << (cfg.words_per_row ? std::to_string(*cfg.words_per_row) : "auto") << "\n";
  os << "write_vt_offset = " << text::exact(cfg.write_vt_offset) << "\n";
  return os.str();
}

/// Rows/columns of the bitcell array. With AUTO words_per_row the power-of-two
/// choice minimizing |cols*cell_w - rows*cell_h| wins; ties go to the smaller value.
inline DerivedGeometry resolve_geometry(const MemoryConfig& cfg, double cell_w, double cell_h) {
  if (!(cell_w > 0) || !(cell_h > 0)) throw std::invalid_argument("cell dimensions must be positive");
  int wpr = 0;
  if (cfg.words_per_row) {
    wpr = *cfg.words_per_row;
    if (wpr < 1 || cfg.num_words % wpr != 0 || !is_pow2(cfg.num_words / wpr))
      throw std::invalid_argument("words_per_row does not give a power-of-two row count");
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (long long cand = 1; cand <= cfg.num_words; cand *= 2) {
      if (cfg.num_words % cand != 0 || !is_pow2(cfg.num_words / cand)) continue;
      double cols = static_cast<double>(cfg.word_size) * static_cast<double>(cand);
      double rows = static_cast<double>(cfg.num_words / cand);
      double skew = std::fabs(cols * cell_w - rows * cell_h);
      if (skew < best) {
        best = skew;
        wpr = static_cast<int>(cand);
      }
    }
    if (wpr == 0)
      throw std::invalid_argument("num_words " + std::to_string(cfg.num_words) +
                                  " cannot be factored into a power-of-two row count");
  }
  DerivedGeometry g;
  g.words_per_row = wpr;
  g.rows = cfg.num_words / wpr;
  g.cols = cfg.word_size * wpr;
  g.addr_bits_row = ceil_log2(g.rows);
  g.addr_bits_col = ceil_log2(wpr);
  return g;
}

}  // namespace gcram
