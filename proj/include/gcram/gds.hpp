// SPDX-License-Identifier: Apache-2.0
//
// GDSII stream writer and reader for the rectangle/SREF subset the compiler emits.
//
// Timestamps are written as zeros so identical libraries produce identical
// bytes. Pins travel as BOUNDARY elements tagged with property 1 (the pin
// name); a cell boundary is a BOUNDARY on the marker layer tagged with
// property 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gcram/layout.hpp"

namespace gcram {

class GdsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace gds {

enum Record : uint16_t {
  HEADER = 0x0002,
  BGNLIB = 0x0102,
  LIBNAME = 0x0206,
  UNITS = 0x0305,
  ENDLIB = 0x0400,
  BGNSTR = 0x0502,
  STRNAME = 0x0606,
  ENDSTR = 0x0700,
  BOUNDARY = 0x0800,
  SREF = 0x0A00,
  LAYER = 0x0D02,
  DATATYPE = 0x0E02,
  XY = 0x1003,
  ENDEL = 0x1100,
  SNAME = 0x1206,
  STRANS = 0x1A01,
  ANGLE = 0x1C05,
  PROPATTR = 0x2B02,
  PROPVALUE = 0x2C06,
};

inline constexpr int16_t kPinProperty = 1;
inline constexpr int16_t kBoundaryProperty = 2;

/// Excess-64 base-16 8-byte real.
inline uint64_t encode_real(double v) {
  if (v == 0) return 0;
  uint64_t sign = 0;
  if (v < 0) {
    sign = 0x8000000000000000ULL;
    v = -v;
  }
  int exponent = 64;
  while (v >= 1.0) {
    v /= 16.0;
    ++exponent;
  }
  while (v < 1.0 / 16.0) {
    v *= 16.0;
    --exponent;
  }
  auto mantissa = static_cast<uint64_t>(std::llround(std::ldexp(v, 56)));
  if (mantissa >= (1ULL << 56)) {
    mantissa >>= 4;
    ++exponent;
  }
  if (exponent < 0 || exponent > 127) throw GdsError("real value out of GDSII range");
  return sign | (static_cast<uint64_t>(exponent) << 56) | mantissa;
}

inline double decode_real(uint64_t bits) {
  double sign = (bits & 0x8000000000000000ULL) ? -1.0 : 1.0;
  int exponent = static_cast<int>((bits >> 56) & 0x7F);
  uint64_t mantissa = bits & 0x00FFFFFFFFFFFFFFULL;
  return sign * std::ldexp(static_cast<double>(mantissa), -56 + 4 * (exponent - 64));
}

}  // namespace gds

struct GdsOptions {
  int dbu_per_um = 1000;
  GdsLayer boundary_layer{235, 0};
};

struct GdsLibrary {
  std::string name;
  double user_units_per_dbu = 1e-3;  ///< first UNITS value
  double meters_per_dbu = 1e-9;      ///< second UNITS value
  std::vector<LayoutCell> cells;
};

namespace detail {

class GdsWriter {
 public:
  void record(uint16_t type) { header(type, 0); }
  void int16s(uint16_t type, std::initializer_list<int16_t> values) {
    header(type, values.size() * 2);
    for (auto v : values) put16(static_cast<uint16_t>(v));
  }
  void zeros16(uint16_t type, size_t n) {
    header(type, n * 2);
    for (size_t i = 0; i < n; ++i) put16(0);
  }
  void ascii(uint16_t type, std::string_view s) {
    size_t n = s.size() + (s.size() % 2);
    header(type, n);
    buf_.insert(buf_.end(), s.begin(), s.end());
    if (s.size() % 2) buf_.push_back(0);
  }
  void reals(uint16_t type, std::initializer_list<double> values) {
    header(type, values.size() * 8);
    for (auto v : values) {
      uint64_t bits = gds::encode_real(v);
      for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<uint8_t>(bits >> shift));
    }
  }
  void xy(const std::vector<std::pair<int32_t, int32_t>>& pts) {
    header(gds::XY, pts.size() * 8);
    for (auto [x, y] : pts) {
      put32(static_cast<uint32_t>(x));
      put32(static_cast<uint32_t>(y));
    }
  }
  void rect_ring(const Rect& r) {
    xy({{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}});
  }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  void header(uint16_t type, size_t payload) {
    size_t len = payload + 4;
    if (len > 0xFFFF) throw GdsError("GDSII record too long");
    put16(static_cast<uint16_t>(len));
    put16(type);
  }
  void put16(uint16_t v) {
    buf_.push_back(static_cast<uint8_t>(v >> 8));
    buf_.push_back(static_cast<uint8_t>(v));
  }
  void put32(uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<uint8_t>(v >> shift));
  }
  std::vector<uint8_t> buf_;
};

inline void write_boundary(GdsWriter& w, GdsLayer layer, const Rect& r, int16_t prop, std::string_view value) {
  w.record(gds::BOUNDARY);
  w.int16s(gds::LAYER, {layer.layer});
  w.int16s(gds::DATATYPE, {layer.datatype});
  w.rect_ring(r);
  if (prop) {
    w.int16s(gds::PROPATTR, {prop});
    w.ascii(gds::PROPVALUE, value);
  }
  w.record(gds::ENDEL);
}

}  // namespace detail

/// Serializes cells in the given order (callers pass children before parents).
inline std::vector<uint8_t> write_gds(std::string_view lib_name, const std::vector<const LayoutCell*>& cells,
                                      const GdsOptions& opts = {}) {
  detail::GdsWriter w;
  w.int16s(gds::HEADER, {600});
  w.zeros16(gds::BGNLIB, 12);
  w.ascii(gds::LIBNAME, lib_name);
  double dbu_in_user = 1.0 / opts.dbu_per_um;
  w.reals(gds::UNITS, {dbu_in_user, 1e-6 * dbu_in_user});
  for (const auto* c : cells) {
    w.zeros16(gds::BGNSTR, 12);
    w.ascii(gds::STRNAME, c->name);
    for (const auto& s : c->rects) detail::write_boundary(w, s.layer, s.rect, 0, {});
    for (const auto& p : c->pins) detail::write_boundary(w, p.layer, p.rect, gds::kPinProperty, p.name);
    if (c->boundary.valid())
      detail::write_boundary(w, opts.boundary_layer, c->boundary, gds::kBoundaryProperty, "boundary");
    for (const auto& pl : c->placements) {
      w.record(gds::SREF);
      w.ascii(gds::SNAME, pl.cell);
      int16_t strans = 0;
      double angle = 0;
      switch (pl.orient) {
        case Orientation::R0: break;
        case Orientation::R90: angle = 90; break;
        case Orientation::R180: angle = 180; break;
        case Orientation::R270: angle = 270; break;
        case Orientation::MX: strans = static_cast<int16_t>(0x8000); break;
        case Orientation::MY: strans = static_cast<int16_t>(0x8000), angle = 180; break;
      }
      if (strans || angle != 0) {
        w.int16s(gds::STRANS, {strans});
        if (angle != 0) w.reals(gds::ANGLE, {angle});
      }
      w.xy({{pl.dx, pl.dy}});
      w.record(gds::ENDEL);
    }
    w.record(gds::ENDSTR);
  }
  w.record(gds::ENDLIB);
  return w.take();
}

/// Writes `top` and everything it references, children first.
inline std::vector<uint8_t> write_gds(std::string_view lib_name, const LayoutCell& top, const LayoutLibrary& lib,
                                      const GdsOptions& opts = {}) {
  return write_gds(lib_name, layout_order({&top}, lib), opts);
}

inline std::vector<uint8_t> write_gds(const GdsLibrary& lib, const GdsOptions& opts = {}) {
  std::vector<const LayoutCell*> cells;
  for (const auto& c : lib.cells) cells.push_back(&c);
  return write_gds(lib.name, cells, opts);
}

namespace detail {

struct GdsRecord {
  uint16_t type;
  const uint8_t* data;
  size_t size;
  size_t offset;

  int16_t i16(size_t k = 0) const { return static_cast<int16_t>((data[2 * k] << 8) | data[2 * k + 1]); }
  int32_t i32(size_t k) const {
    uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v = (v << 8) | data[4 * k + b];
    return static_cast<int32_t>(v);
  }
  double real(size_t k = 0) const {
    uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v = (v << 8) | data[8 * k + b];
    return gds::decode_real(v);
  }
  std::string str() const {
    std::string s(reinterpret_cast<const char*>(data), size);
    while (!s.empty() && s.back() == '\0') s.pop_back();
    return s;
  }
};

class GdsReader {
 public:
  explicit GdsReader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}
  bool done() const { return pos_ >= bytes_.size(); }
  GdsRecord next() {
    if (pos_ + 4 > bytes_.size()) throw GdsError("truncated record header at byte " + std::to_string(pos_));
    size_t len = (bytes_[pos_] << 8) | bytes_[pos_ + 1];
    uint16_t type = static_cast<uint16_t>((bytes_[pos_ + 2] << 8) | bytes_[pos_ + 3]);
    if (len < 4) throw GdsError("invalid record length at byte " + std::to_string(pos_));
    if (pos_ + len > bytes_.size()) throw GdsError("truncated record at byte " + std::to_string(pos_));
    GdsRecord r{type, bytes_.data() + pos_ + 4, len - 4, pos_};
    pos_ += len;
    return r;
  }
  GdsRecord expect(uint16_t type) {
    auto r = next();
    if (r.type != type) throw GdsError(unexpected(r));
    return r;
  }
  static std::string unexpected(const GdsRecord& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "unexpected record 0x%04x at byte %zu", r.type, r.offset);
    return buf;
  }

 private:
  const std::vector<uint8_t>& bytes_;
  size_t pos_ = 0;
};

inline Rect ring_to_rect(const GdsRecord& xy) {
  size_t n = xy.size / 8;
  if (n != 5) throw GdsError("BOUNDARY is not a 5-point rectangle ring");
  Rect r{xy.i32(0), xy.i32(1), xy.i32(0), xy.i32(1)};
  for (size_t k = 0; k < n; ++k) {
    r.x0 = std::min(r.x0, xy.i32(2 * k));
    r.x1 = std::max(r.x1, xy.i32(2 * k));
    r.y0 = std::min(r.y0, xy.i32(2 * k + 1));
    r.y1 = std::max(r.y1, xy.i32(2 * k + 1));
  }
  for (size_t k = 0; k < n; ++k) {
    int32_t x = xy.i32(2 * k), y = xy.i32(2 * k + 1);
    if ((x != r.x0 && x != r.x1) || (y != r.y0 && y != r.y1)) throw GdsError("BOUNDARY is not axis-aligned");
  }
  if (!r.valid()) throw GdsError("degenerate BOUNDARY");
  return r;
}

inline bool ignorable(uint16_t type) {
  switch (type) {
    case 0x1F06:  // REFLIBS
    case 0x2006:  // FONTS
    case 0x2202:  // GENERATIONS
    case 0x2306:  // ATTRTABLE
    case 0x2601:  // ELFLAGS
    case 0x2F03:  // PLEX
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Parses the subset written by write_gds.
inline GdsLibrary read_gds(const std::vector<uint8_t>& bytes, const GdsOptions& opts = {}) {
  detail::GdsReader in(bytes);
  GdsLibrary lib;
  in.expect(gds::HEADER);
  in.expect(gds::BGNLIB);
  lib.name = in.expect(gds::LIBNAME).str();
  auto units = in.expect(gds::UNITS);
  if (units.size != 16) throw GdsError("malformed UNITS record");
  lib.user_units_per_dbu = units.real(0);
  lib.meters_per_dbu = units.real(1);
  while (true) {
    auto r = in.next();
    if (r.type == gds::ENDLIB) break;
    if (detail::ignorable(r.type)) continue;
    if (r.type != gds::BGNSTR) throw GdsError(detail::GdsReader::unexpected(r));
    LayoutCell cell;
    cell.name = in.expect(gds::STRNAME).str();
    while (true) {
      auto e = in.next();
      if (e.type == gds::ENDSTR) break;
      if (detail::ignorable(e.type)) continue;
      if (e.type == gds::BOUNDARY) {
        GdsLayer layer;
        layer.layer = in.expect(gds::LAYER).i16();
        layer.datatype = in.expect(gds::DATATYPE).i16();
        Rect rect = detail::ring_to_rect(in.expect(gds::XY));
        int16_t prop = 0;
        std::string value;
        auto tail = in.next();
        while (tail.type == gds::PROPATTR) {
          prop = tail.i16();
          value = in.expect(gds::PROPVALUE).str();
          tail = in.next();
        }
        if (tail.type != gds::ENDEL) throw GdsError(detail::GdsReader::unexpected(tail));
        if (prop == gds::kPinProperty) cell.pins.push_back({value, layer, rect});
        else if (prop == gds::kBoundaryProperty && layer == opts.boundary_layer) cell.boundary = rect;
        else cell.rects.push_back({layer, rect});
      } else if (e.type == gds::SREF) {
        Placement pl;
        pl.cell = in.expect(gds::SNAME).str();
        auto t = in.next();
        bool mirror = false;
        double angle = 0;
        if (t.type == gds::STRANS) {
          mirror = (static_cast<uint16_t>(t.i16()) & 0x8000) != 0;
          if (static_cast<uint16_t>(t.i16()) & 0x0006) throw GdsError("magnified or absolute SREF not supported");
          t = in.next();
          if (t.type == gds::ANGLE) {
            angle = t.real();
            t = in.next();
          }
        }
        if (t.type != gds::XY || t.size != 8) throw GdsError("SREF requires a single XY point");
        pl.dx = t.i32(0);
        pl.dy = t.i32(1);
        int quarter = static_cast<int>(std::lround(angle / 90.0)) % 4;
        if (std::fabs(angle - 90.0 * std::lround(angle / 90.0)) > 1e-9) throw GdsError("non-Manhattan SREF angle");
        if (!mirror) {
          static constexpr Orientation rot[] = {Orientation::R0, Orientation::R90, Orientation::R180,
                                                Orientation::R270};
          pl.orient = rot[(quarter + 4) % 4];
        } else if (quarter == 0) {
          pl.orient = Orientation::MX;
        } else if (quarter == 2) {
          pl.orient = Orientation::MY;
        } else {
          throw GdsError("mirrored rotated SREF not supported");
        }
        in.expect(gds::ENDEL);
        cell.placements.push_back(std::move(pl));
      } else {
        throw GdsError(detail::GdsReader::unexpected(e));
      }
    }
    lib.cells.push_back(std::move(cell));
  }
  return lib;
}

/// Rectangle from 64-bit coordinates; throws when the result does not fit 32-bit dbu.
inline Rect checked_rect(int64_t x0, int64_t y0, int64_t x1, int64_t y1) {
  constexpr int64_t lo = std::numeric_limits<int32_t>::min(), hi = std::numeric_limits<int32_t>::max();
  for (auto v : {x0, y0, x1, y1})
    if (v < lo || v > hi) throw GdsError("coordinate overflow beyond 32-bit database units");
  return {static_cast<int32_t>(x0), static_cast<int32_t>(y0), static_cast<int32_t>(x1), static_cast<int32_t>(y1)};
}

}  // namespace gcram
