// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcs/compare.hpp"
#include "arcs/context.hpp"
#include "arcs/symstate.hpp"

namespace arcs {

// Per-path store of contiguous array segments <(base,offset), length, summary>.
// Summaries describe the current content of the covered cells; point writes
// split (constant relative offset) or demote (symbolic offset) them, adjacent
// segments with syntactically equivalent summaries merge.

struct ContentSummary {
    enum class Kind { Indexed, Aggregate, Unknown };
    Kind kind = Kind::Unknown;
    SymExpr phi;       // Indexed: mentions the i_off placeholder as an atom
    AggOp op = AggOp::Sum;
    SymExpr aggValue;  // Aggregate

    static ContentSummary unknown() { return ContentSummary{}; }
    static ContentSummary indexed(SymExpr formula) {
        ContentSummary c;
        c.kind = Kind::Indexed;
        c.phi = std::move(formula);
        return c;
    }
};

bool summaryEq(const ContentSummary& a, const ContentSummary& b);

struct Segment {
    SymAddr start;
    SymExpr len; // cells, >= 0 under the path condition
    ContentSummary summary;
};

struct SegmentStore {
    // per-base ordered list, sorted by offset when offsets are comparable
    std::map<AtomPtr, std::vector<Segment>, AtomLess> byBase;

    bool empty() const { return byBase.empty(); }
};

// All summaries whose segment may contain `a` under pc, with i_off already
// rebased to the cell's relative offset. `definite` is set when exactly one
// segment matches and containment is implied by pc (the value can be used
// directly instead of an opaque read).
struct SegReadResult {
    std::vector<SymExpr> facts;
    bool definite = false;
};

SegReadResult segRead(const AnalysisContext& ctx, const SegmentStore& store, const SymAddr& a,
                      const PathCond& pc);

// Adjusts segment structure after a write to `a` (the value itself lives in
// the memory map). Constant relative offsets split, symbolic ones demote.
void segWrite(const AnalysisContext& ctx, SegmentStore& store, const SymAddr& a,
              const PathCond& pc);

// Fixpoint pass merging adjacent segments with equivalent summaries.
void segMerge(const AnalysisContext& ctx, SegmentStore& store);

void insertSegment(const AnalysisContext& ctx, SegmentStore& store, Segment seg,
                   const PathCond& pc);

// Concrete meaning of a store under a valuation of its symbols: cell -> value
// facts (Unknown and aggregate summaries claim no per-cell facts).
// Throws Error(NonConcretizable) when an offset or length stays symbolic.
struct CellFact {
    AtomPtr base;
    long long cell = 0;
    long long value = 0;
};

std::vector<CellFact> denote(const AnalysisContext& ctx, const SegmentStore& store,
                             const std::map<uint32_t, long long>& valuation);

std::string show(const SegmentStore& store); // "base[off .. off+len) : summary" lines

} // namespace arcs
