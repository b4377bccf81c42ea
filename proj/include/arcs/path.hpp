// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "arcs/segments.hpp"
#include "arcs/symstate.hpp"

namespace arcs {

// Footprint log: every store location touched along the path. Point events
// come from single writes, Range events from loop summaries ([lo,hi) cells,
// with wholeArray set when the bound was not derivable).
struct FootprintEvent {
    enum class Kind { Point, Range };
    Kind kind = Kind::Point;
    AtomPtr base;
    SymExpr off;     // Point
    SymExpr lo, hi;  // Range
    bool wholeArray = false;
};

struct SymbolicPath {
    int id = 0;
    int loc = 0;
    SymbolicState state;
    SegmentStore segs;
    PathCond pc;
    std::vector<FootprintEvent> footprint;
    std::optional<SymExpr> result; // bound by `return e`
    bool finished = false;
};

using Configuration = std::vector<SymbolicPath>;

} // namespace arcs
