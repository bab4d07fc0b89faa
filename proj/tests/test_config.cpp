#include <gtest/gtest.h>

#include "gcram/config.hpp"

using namespace gcram;

namespace {

const char* kBase =
    "word_size = 32\n"
    "num_words = 1024\n"
    "cell_variant = si_si_nn\n"
    "tech_path = generic45.tech\n";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, ParsesMandatoryKeysAndDefaults) {
  auto cfg = parse_config(kBase);
  EXPECT_EQ(cfg.word_size, 32);
  EXPECT_EQ(cfg.num_words, 1024);
  EXPECT_EQ(cfg.cell_variant, CellVariant::SI_SI_NN);
  EXPECT_FALSE(cfg.wwl_level_shifter);
  EXPECT_DOUBLE_EQ(cfg.vdd, 1.1);
  EXPECT_DOUBLE_EQ(cfg.boost_voltage(), 1.5);
  EXPECT_DOUBLE_EQ(cfg.temperature, 300.0);
  EXPECT_FALSE(cfg.words_per_row.has_value());
  EXPECT_EQ(cfg.bits(), 32768);
}

TEST(Config, RoundTripsThroughText) {
  auto cfg = parse_config(std::string(kBase) + "vwwl_boost = 1.7\nwords_per_row = 4\nwrite_vt_offset = 0.3\n"
                                               "wwl_level_shifter = true\n");
  EXPECT_EQ(parse_config(to_text(cfg)), cfg);
}

TEST(Config, CommentsAndBlankLines) {
  auto cfg = parse_config("# header\n\n" + std::string(kBase) + "vdd = 1.0   # low\n");
  EXPECT_DOUBLE_EQ(cfg.vdd, 1.0);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line(std::string(kBase) + "bogus = 1\n"), 5);
  EXPECT_EQ(error_line(std::string(kBase) + "vdd = fast\n"), 5);
  EXPECT_EQ(error_line("word_size = 8\nnum_words = 96\ncell_variant = os_os\ntech_path = t\nwords_per_row = 4\n"), 5);
  EXPECT_EQ(error_line("word_size = 8\nnum_words = 100\ncell_variant = os_os\ntech_path = t\nwords_per_row = 3\n"), 5);
  EXPECT_EQ(error_line("word_size = 8\nnum_words = 1\ncell_variant = os_os\ntech_path = t\n"), 2);
  EXPECT_EQ(error_line("word_size = 0\nnum_words = 4\ncell_variant = os_os\ntech_path = t\n"), 1);
  EXPECT_EQ(error_line(std::string(kBase) + "num_banks = 2\n"), 5);
  EXPECT_EQ(error_line(std::string(kBase) + "wwl_level_shifter = true\nvwwl_boost = 1.0\n"), 6);
  EXPECT_EQ(error_line("word_size = 8\nnum_words = 4\ncell_variant = dram\ntech_path = t\n"), 3);
}

TEST(Config, MissingMandatoryKey) {
  EXPECT_THROW(parse_config("word_size = 8\nnum_words = 4\ncell_variant = os_os\n"), ParseError);
}

TEST(Config, SramWarnsInsteadOfFailing) {
  std::vector<std::string> warnings;
  auto cfg = parse_config(
      "word_size = 8\nnum_words = 64\ncell_variant = sram_6t\ntech_path = t\nwwl_level_shifter = true\n"
      "vwwl_boost = 1.0\nwrite_vt_offset = 0.2\n",
      &warnings);
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_FALSE(cfg.level_shifted());
}

TEST(Geometry, ExplicitWordsPerRow) {
  auto cfg = parse_config(std::string(kBase) + "words_per_row = 4\n");
  auto g = resolve_geometry(cfg, 1.0, 1.0);
  EXPECT_EQ(g.rows, 256);
  EXPECT_EQ(g.cols, 128);
  EXPECT_EQ(g.addr_bits_row, 8);
  EXPECT_EQ(g.addr_bits_col, 2);
}

TEST(Geometry, AutoMatchesBruteForceSquareness) {
  for (int ws : {1, 4, 8, 16, 32, 64}) {
    for (int nw : {2, 16, 64, 256, 1024, 4096}) {
      for (double aspect : {0.5, 0.73, 1.0, 1.6}) {
        MemoryConfig cfg;
        cfg.word_size = ws;
        cfg.num_words = nw;
        auto g = resolve_geometry(cfg, aspect, 1.0);
        double best = 1e300;
        int best_wpr = 0;
        for (int w = 1; w <= nw; w *= 2) {
          double skew = std::fabs(ws * w * aspect - double(nw / w));
          if (skew < best) best = skew, best_wpr = w;
        }
        EXPECT_EQ(g.words_per_row, best_wpr) << ws << "x" << nw << " aspect " << aspect;
        EXPECT_EQ(g.rows * g.words_per_row, nw);
        EXPECT_TRUE(is_pow2(g.rows));
      }
    }
  }
}
