// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcs/loopinfo.hpp"

namespace arcs {

// Loop analysis runs as a two-stage pipeline: extractLoopInfo produces the
// structural view, then invariant plugins contribute clauses and the selected
// principal (path-sensitive) plugin fixes the exit-path structure. The
// LoopAssignsPlugin always runs and provides the sound havoc baseline; fill
// may refine havocked ranges with directly-indexed summaries.

// Annotation-level assigns range with an inclusive end, possibly mentioning
// the iterator's current value as a CurVar atom.
struct AssignsTerm {
    std::string array;
    SymExpr lo;
    SymExpr hiIncl;
};

struct InvariantClause {
    enum class Kind { RangeInvariant, Invariant, LoopAssigns };
    Kind kind = Kind::Invariant;
    std::string plugin;

    // RangeInvariant: lo <= CurVar(iterVar) [<= hi]
    SymExpr lo;
    std::string iterVar;
    std::optional<SymExpr> hi;

    // Invariant: BoolAtom or QuantConstraint over CurVar-bearing expressions
    std::optional<PcElem> formula;

    // LoopAssigns
    std::vector<std::string> scalars;
    std::vector<AssignsTerm> ranges;
};

bool clauseEq(const InvariantClause& a, const InvariantClause& b);

// Cells [lo,hi) of `base` whose content the loop may have changed.
struct HavocRange {
    AtomPtr base;
    std::string array;
    SymExpr lo, hi;
    bool wholeArray = false;
};

// A refined summary for a havocked range: content phi(i_off) relative to lo.
struct FillFact {
    AtomPtr base;
    std::string array;
    SymExpr lo, hi;
    SymExpr phi;
};

struct LoopExit {
    enum class Kind { Normal, Break };
    Kind kind = Kind::Normal;
    std::vector<PcElem> conds;                // over pre-loop exprs and fresh exit symbols
    std::map<std::string, SymExpr> bindings;  // every scalar written by the body
    std::vector<HavocRange> havocs;
    std::vector<FillFact> fills;
};

struct LoopSummary {
    std::vector<LoopExit> exits;
    std::vector<InvariantClause> clauses;
    std::string principal; // plugin that fixed the exit structure
    bool fail = false;
    std::string failReason;
};

struct PluginRegistry {
    bool search = true; // priority 30, path-sensitive
    bool maxmin = true; // priority 20, path-sensitive
    bool affine = true; // path-insensitive clauses + default exit builder (10)
    bool fill = true;   // path-insensitive refinement
    // loop assigns (priority 0 fallback + footprint baseline) always runs

    static PluginRegistry fromNames(const std::vector<std::string>& names);
};

LoopSummary analyzeLoop(AnalysisContext& ctx, const IrStmt& loop, const SymbolicPath& pre,
                        const PluginRegistry& reg);

// Algorithm: rebind scalars, apply havocs/fills (epoch bump, segment refresh,
// footprint extension), conjoin exit conditions and instantiated invariants,
// prune infeasible exits, merge segments.
std::vector<SymbolicPath> postStateUpdate(AnalysisContext& ctx, const SymbolicPath& pre,
                                          const LoopSummary& summary, int loopId);

} // namespace arcs
