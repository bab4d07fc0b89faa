// SPDX-License-Identifier: Apache-2.0
//
// Static SVG plots: Shmoo grids and x/y line plots.

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gcram/dse.hpp"
#include "gcram/text.hpp"

namespace gcram {

namespace detail {

inline std::string svg_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string_view fail_mark(Verdict v) {
  switch (v) {
    case Verdict::FAIL_FREQ: return "F";
    case Verdict::FAIL_RETENTION: return "R";
    case Verdict::FAIL_BOTH: return "FR";
    default: return "";
  }
}

}  // namespace detail

/// Configs on x, tasks on y. Pass is a filled dot, failure an open dot with
/// F (frequency), R (retention) or FR. The selected config per task is ringed.
inline std::string shmoo_svg(const ShmooResult& r) {
  const int cell = 40, left = 200, top = 30, bottom = 70;
  int w = left + cell * static_cast<int>(r.configs.size()) + 20;
  int h = top + cell * static_cast<int>(r.tasks.size()) + bottom;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  for (size_t j = 0; j < r.tasks.size(); ++j) {
    int y = top + cell * static_cast<int>(j) + cell / 2;
    const auto& t = r.tasks[j];
    os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << t.task_id << " "
       << detail::svg_escape(t.name) << " " << to_string(t.cache_level) << "</text>\n";
    auto best = select_optimal(r, j);
    for (size_t i = 0; i < r.configs.size(); ++i) {
      int x = left + cell * static_cast<int>(i) + cell / 2;
      auto v = r.grid[i][j];
      if (v == Verdict::PASS) {
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"9\" fill=\"#2a7\"/>\n";
      } else {
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"9\" fill=\"none\" stroke=\"#c33\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << y + 4 << "\" text-anchor=\"middle\" fill=\"#c33\">"
           << detail::fail_mark(v) << "</text>\n";
      }
      if (best && *best == i)
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"14\" fill=\"none\" stroke=\"black\"/>\n";
    }
  }
  int ly = top + cell * static_cast<int>(r.tasks.size()) + 12;
  for (size_t i = 0; i < r.configs.size(); ++i) {
    int x = left + cell * static_cast<int>(i) + cell / 2;
    os << "<text transform=\"translate(" << x << "," << ly << ") rotate(60)\">" << r.configs[i].word_size << "x"
       << r.configs[i].num_words << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Polyline plot of (x, y) points. With `log_y` the y axis is log10.
inline std::string line_plot_svg(const std::vector<std::pair<double, double>>& pts, const std::string& x_label,
                                 const std::string& y_label, bool log_y = false) {
  const int w = 520, h = 360, ml = 70, mr = 20, mt = 20, mb = 50;
  std::vector<std::pair<double, double>> p;
  for (auto [x, y] : pts) {
    double yy = log_y ? (y > 0 ? std::log10(y) : NAN) : y;
    if (std::isfinite(x) && std::isfinite(yy)) p.emplace_back(x, yy);
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\"" << h - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!p.empty()) {
    auto [x0, x1] = std::minmax_element(p.begin(), p.end(), [](auto a, auto b) { return a.first < b.first; });
    auto [y0, y1] = std::minmax_element(p.begin(), p.end(), [](auto a, auto b) { return a.second < b.second; });
    double xl = x0->first, xr = x1->first, yb = y0->second, yt = y1->second;
    if (xr == xl) xr = xl + 1;
    if (yt == yb) yt = yb + 1;
    auto sx = [&](double x) { return ml + (x - xl) / (xr - xl) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - (y - yb) / (yt - yb) * (h - mt - mb); };
    os << "<polyline fill=\"none\" stroke=\"#26c\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : p) os << text::num(sx(x), 6) << "," << text::num(sy(y), 6) << " ";
    os << "\"/>\n";
    auto lab = [&](double v) { return log_y ? "1e" + text::num(v, 3) : text::num(v, 4); };
    os << "<text x=\"" << ml << "\" y=\"" << h - mb + 15 << "\">" << text::num(xl, 4) << "</text>\n";
    os << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 15 << "\" text-anchor=\"end\">" << text::num(xr, 4)
       << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << h - mb << "\" text-anchor=\"end\">" << lab(yb) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\">" << lab(yt) << "</text>\n";
  }
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">"
     << detail::svg_escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << (mt + h - mb) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::svg_escape(y_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace gcram
