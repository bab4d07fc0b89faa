#include <gtest/gtest.h>

#include <random>

#include "gcram/gds.hpp"

using namespace gcram;

namespace {

LayoutLibrary sample_library() {
  LayoutLibrary lib;
  LayoutCell leaf;
  leaf.name = "leaf";
  leaf.add({7, 0}, {0, 0, 100, 70});
  leaf.add({5, 0}, {-20, 10, 30, 300});
  leaf.add_pin("a", {7, 0}, {0, 0, 70, 70});
  leaf.boundary = {-20, 0, 100, 300};
  lib["leaf"] = leaf;
  LayoutCell top;
  top.name = "top";
  top.place("leaf", 0, 0);
  top.place("leaf", 500, 0, Orientation::MX);
  top.place("leaf", 1000, 0, Orientation::MY);
  top.place("leaf", 0, 1000, Orientation::R90);
  top.place("leaf", 0, 2000, Orientation::R180);
  top.place("leaf", 0, 3000, Orientation::R270);
  top.add({9, 0}, {-2000000, -5, 2000000, 65});
  top.boundary = {-2000000, -5000, 2000000, 5000};
  lib["top"] = top;
  return lib;
}

}  // namespace

TEST(GdsReal, KnownEncodings) {
  EXPECT_EQ(gds::encode_real(1.0), 0x4110000000000000ULL);
  EXPECT_EQ(gds::encode_real(-1.0), 0xC110000000000000ULL);
  EXPECT_EQ(gds::encode_real(0.0), 0u);
  EXPECT_EQ(gds::encode_real(90.0), 0x425A000000000000ULL);
  EXPECT_DOUBLE_EQ(gds::decode_real(gds::encode_real(1e-3)), 1e-3);
  EXPECT_DOUBLE_EQ(gds::decode_real(gds::encode_real(1e-9)), 1e-9);
}

TEST(GdsReal, RandomRoundTripIsStable) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(1.0, 10.0);
  std::uniform_int_distribution<int> ex(-30, 30);
  for (int i = 0; i < 2000; ++i) {
    double v = mant(rng) * std::pow(10.0, ex(rng));
    auto bits = gds::encode_real(v);
    EXPECT_EQ(gds::encode_real(gds::decode_real(bits)), bits);
    EXPECT_NEAR(gds::decode_real(bits) / v, 1.0, 1e-15);
  }
}

TEST(Gds, EmptyLibraryGoldenBytes) {
  auto bytes = write_gds("lib", std::vector<const LayoutCell*>{});
  const std::vector<uint8_t> golden = {
      0x00, 0x06, 0x00, 0x02, 0x02, 0x58,                                      // HEADER 600
      0x00, 0x1C, 0x01, 0x02, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,  // BGNLIB
      0, 0, 0, 0, 0, 0, 0, 0,                                                  //
      0x00, 0x08, 0x02, 0x06, 'l', 'i', 'b', 0x00,                             // LIBNAME
      0x00, 0x14, 0x03, 0x05,                                                  // UNITS
      0x3E, 0x41, 0x89, 0x37, 0x4B, 0xC6, 0xA7, 0xF0,                          //   1e-3
      0x39, 0x44, 0xB8, 0x2F, 0xA0, 0x9B, 0x5A, 0x54,                          //   1e-9
      0x00, 0x04, 0x04, 0x00,                                                  // ENDLIB
  };
  EXPECT_EQ(bytes, golden);
}

TEST(Gds, WriteReadWriteIsByteIdentical) {
  auto lib = sample_library();
  auto first = write_gds("sample", lib.at("top"), lib);
  auto parsed = read_gds(first);
  EXPECT_EQ(parsed.name, "sample");
  EXPECT_DOUBLE_EQ(parsed.user_units_per_dbu, 1e-3);
  ASSERT_EQ(parsed.cells.size(), 2u);
  EXPECT_EQ(parsed.cells[0], lib.at("leaf"));
  EXPECT_EQ(parsed.cells[1], lib.at("top"));
  EXPECT_EQ(write_gds(parsed), first);
}

TEST(Gds, TruncatedInputIsRejected) {
  auto lib = sample_library();
  auto bytes = write_gds("sample", lib.at("top"), lib);
  for (size_t cut : {size_t{3}, size_t{10}, bytes.size() / 2, bytes.size() - 2}) {
    std::vector<uint8_t> part(bytes.begin(), bytes.begin() + static_cast<long>(cut));
    EXPECT_THROW(read_gds(part), GdsError) << cut;
  }
}

TEST(Gds, UnknownRecordIsRejected) {
  auto bytes = write_gds("lib", std::vector<const LayoutCell*>{});
  // replace ENDLIB by a PATH record (0x0900), which the reader does not support
  bytes[bytes.size() - 2] = 0x09;
  bytes.insert(bytes.end(), {0x00, 0x04, 0x04, 0x00});
  EXPECT_THROW(read_gds(bytes), GdsError);
}

TEST(Gds, CoordinateOverflowIsReported) {
  EXPECT_NO_THROW(checked_rect(0, 0, 2147483647LL, 10));
  EXPECT_THROW(checked_rect(0, 0, 2147483648LL, 10), GdsError);
  EXPECT_THROW(checked_rect(-2147483649LL, 0, 0, 10), GdsError);
}
