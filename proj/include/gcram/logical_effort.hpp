// SPDX-License-Identifier: Apache-2.0
//
// Inverter-chain sizing by logical effort, delay-chain stage selection and
// Elmore delay of RC ladders.

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gcram/technology.hpp"

namespace gcram {

enum class Parity { ANY, INVERTING, NON_INVERTING };

struct DriverChain {
  double load_cap = 0;   ///< F
  double input_cap = 0;  ///< F, first stage
  int stages = 1;
  std::vector<double> widths;  ///< NMOS width per stage, um
  double stage_effort = 1;
  double modeled_delay = 0;  ///< s

  bool operator==(const DriverChain&) const = default;
};

/// Delay of an N-stage inverter chain with total electrical effort H, seconds.
inline double chain_delay(double h, int n, const LogicalEffortConstants& le) {
  double f = std::pow(h, 1.0 / n);
  return le.tau * (n * f + n * le.p_inv);
}

/// Stage count round(log4 H), at least 1, adjusted by one to meet the parity request.
/// When adjusting, the neighbour with the lower modeled delay is taken.
inline int chain_stages(double h, Parity parity, const LogicalEffortConstants& le) {
  int n = std::max(1, static_cast<int>(std::lround(std::log(std::max(h, 1.0)) / std::log(4.0))));
  bool odd = n % 2 == 1;
  if ((parity == Parity::INVERTING && !odd) || (parity == Parity::NON_INVERTING && odd)) {
    int down = n - 1, up = n + 1;
    if (down >= 1 && chain_delay(h, down, le) <= chain_delay(h, up, le)) n = down;
    else n = up;
  }
  return n;
}

/// Sizes a unit-input inverter chain driving `load_cap`.
inline DriverChain size_driver(double load_cap, const Technology& tech, Parity parity = Parity::ANY) {
  const auto& le = tech.le;
  double c_unit = tech.unit_inverter_cap();
  DriverChain d;
  d.load_cap = load_cap;
  d.input_cap = c_unit;
  double h = std::max(load_cap / c_unit, 1e-9);
  d.stages = chain_stages(h, parity, le);
  d.stage_effort = std::pow(h, 1.0 / d.stages);
  double w = le.unit_w;
  for (int i = 0; i < d.stages; ++i) {
    d.widths.push_back(w);
    w *= d.stage_effort;
  }
  d.modeled_delay = chain_delay(h, d.stages, le);
  return d;
}

/// Smallest even stage count whose modeled delay reaches `target`, fanout-f stages.
inline int delay_chain_stages(double target, const Technology& tech) {
  double per_stage = tech.le.tau * (tech.params.chain_fanout + tech.le.p_inv);
  int n = 2;
  while (n * per_stage < target) n += 2;
  return n;
}

inline double delay_chain_delay(int stages, const Technology& tech) {
  return stages * tech.le.tau * (tech.params.chain_fanout + tech.le.p_inv);
}

/// Elmore delay of a ladder: segment i has series R_i and shunt C_i at its far node.
/// Sum over i of R_i times all capacitance downstream of it.
inline double elmore_delay(const std::vector<std::pair<double, double>>& segments) {
  double downstream = 0, delay = 0;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    downstream += it->second;
    delay += it->first * downstream;
  }
  return delay;
}

/// Distributed wire of `n` equal segments with total resistance r and capacitance c.
inline std::vector<std::pair<double, double>> uniform_ladder(double r, double c, int n) {
  return std::vector<std::pair<double, double>>(static_cast<size_t>(std::max(n, 1)),
                                                {r / std::max(n, 1), c / std::max(n, 1)});
}

}  // namespace gcram
