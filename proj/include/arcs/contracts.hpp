// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arcs/executor.hpp"

namespace arcs {

// Source-level terms and formulas: parameters, \old(param), \result, array
// cells, implicit array lengths, bound variables, and linear combinations
// with opaque products. This is what contracts, annotations and the
// validation oracle consume.

struct SrcAtom;

struct SrcLin {
    long long k = 0;
    std::vector<std::pair<long long, SrcAtom>> parts;
};

struct SrcAtom {
    enum class Kind { Var, OldVar, Result, Cell, OldCell, Len, Bound, Prod };
    Kind kind = Kind::Var;
    std::string name;              // Var/OldVar/Bound, Cell array, Len array
    std::vector<SrcLin> args;      // Cell index (args[0]); Prod factors as 1-part lins
};

struct SrcFormula {
    enum class Kind { True, False, Cmp, And, Or, Forall, Exists, Chain };
    Kind kind = Kind::True;
    CmpOp rel = CmpOp::Eq;     // Cmp
    SrcLin lhs, rhs;           // Cmp; Chain uses lhs <= chainMid <= rhs
    SrcLin chainMid;
    std::vector<SrcFormula> kids; // And/Or operands, quantifier body at kids[0]
    std::string boundVar;         // Forall/Exists
    std::optional<SrcLin> lo, hi; // quantifier range [lo,hi); absent: unbounded

    static SrcFormula mkTrue() { return SrcFormula{}; }
    static SrcFormula conj(std::vector<SrcFormula> fs);
};

struct AssignsRange {
    std::string array;
    SrcLin start;   // inclusive
    SrcLin endExcl; // exclusive
};

struct LoopAnnotationItem {
    InvariantClause::Kind kind = InvariantClause::Kind::Invariant;
    std::string plugin;
    SrcFormula formula;                    // invariants
    std::vector<std::string> scalars;      // loop assigns
    std::vector<AssignsRange> ranges;
};

struct LoopAnnotation {
    int loopId = -1;
    SourceLoc loc;
    std::vector<LoopAnnotationItem> items;
};

struct Contract {
    std::string function;
    SrcFormula pre;                        // echo of the declared precondition
    std::vector<SrcFormula> postDisjuncts; // one per feasible final path
    std::vector<AssignsRange> assigns;
    std::vector<LoopAnnotation> loops;
    bool projectionResiduals = false;      // something was dropped or widened
    std::vector<std::string> notes;
};

// Source-level formula for each final path: entry symbols become \old(x) or x,
// internal symbols are eliminated through equalities or existentially
// quantified, opaque reads become array cell terms.
SrcFormula projectPath(const AnalysisContext& ctx, const SymbolicPath& path,
                       bool* residual = nullptr);

std::vector<AssignsRange> deriveAssigns(const AnalysisContext& ctx, const Configuration& finals,
                                        bool* residual = nullptr);

Contract synthesize(const AnalysisContext& ctx, const RunResult& rr, const FunctionDef& fd,
                    const BoolPtr& effectivePre);

// Declared preconditions are already source-level; this is a direct mapping.
SrcFormula preToFormula(const BoolPtr& pre);

bool srcLinEq(const SrcLin& a, const SrcLin& b);

} // namespace arcs
