// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.

#pragma once

#include "gcram/analysis.hpp"
#include "gcram/bankgen.hpp"
#include "gcram/cellgen.hpp"
#include "gcram/config.hpp"
#include "gcram/drc.hpp"
#include "gcram/dse.hpp"
#include "gcram/floorplan.hpp"
#include "gcram/gds.hpp"
#include "gcram/layout.hpp"
#include "gcram/logical_effort.hpp"
#include "gcram/netlist.hpp"
#include "gcram/retention.hpp"
#include "gcram/svg.hpp"
#include "gcram/technology.hpp"
