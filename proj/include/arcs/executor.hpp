// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "arcs/context.hpp"
#include "arcs/frontend.hpp"
#include "arcs/ir.hpp"
#include "arcs/loopanalysis.hpp"
#include "arcs/path.hpp"

namespace arcs {

// Queue-based symbolic execution: statement-ordered traversal, branch
// splitting with infeasible-path pruning, loop dispatch to the analyzer,
// and final-configuration collection at the exit location.

// One analyzeLoop invocation: the path condition the analyzer saw plus the
// clauses it produced. A clause becomes a loop annotation only when every
// analysis of that loop yields it (invariants must hold on all paths).
struct LoopAnalysisRecord {
    PathCond prePc;
    std::vector<InvariantClause> clauses;
};

struct RunResult {
    Configuration finals;
    std::map<int, std::vector<LoopAnalysisRecord>> loopRuns; // by loopId
    std::map<int, SourceLoc> loopLocs;
    LoweredFunction lowered;
    Cfg cfg;
};

SymbolicPath initState(AnalysisContext& ctx, const LoweredFunction& lf, const BoolPtr& pre);

// Transfer function for one statement; may split (If), summarize (While) or
// finish (Return) the path.
std::vector<SymbolicPath> execStmt(AnalysisContext& ctx, const IrStmtPtr& stmt,
                                   const SymbolicPath& path, const PluginRegistry& reg,
                                   std::map<int, std::vector<LoopAnalysisRecord>>& loopRuns);

RunResult run(AnalysisContext& ctx, const Program& prog, const FunctionDef& fd,
              const BoolPtr& preOverride = nullptr);

// Scalar read / symbolic evaluation, exposed for the loop analyzer and tests.
SymExpr evalIr(AnalysisContext& ctx, SymbolicPath& path, const IrExprPtr& e);
std::vector<PcElem> evalIrBool(AnalysisContext& ctx, SymbolicPath& path, const IrBoolPtr& b,
                               bool negated);

std::string showPath(const AnalysisContext& ctx, const SymbolicPath& p);

} // namespace arcs
