// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arcs/context.hpp"
#include "arcs/ir.hpp"
#include "arcs/path.hpp"

namespace arcs {

// Structural loop information from one lightweight symbolic pass over the
// body, taken from a generic iteration state: the iterator value is the fresh
// symbol iterSym, other scalars written by the body get their own generic
// symbols, everything else evaluates to its pre-loop expression.

struct LoopBodyPath {
    std::vector<BoolAtom> conds;         // branch conditions taken, in order
    bool condsAtomic = true;             // false when a guard was not a plain comparison
    bool broke = false;
    std::map<std::string, SymExpr> finalEnv; // written scalars only
};

struct LoopWrite {
    std::string array;
    AtomPtr base;
    SymExpr offset;  // pattern over iterSym and pre-loop expressions
    SymExpr value;
    std::vector<BoolAtom> conds;
    bool patternOk = true; // false when the pattern leaks another generic symbol
};

struct LoopInfo {
    bool recognized = false;
    std::string whyNot;
    int loopId = -1;

    std::string iterator;
    uint32_t iterSym = 0;
    long long step = 0;
    SymExpr iterInit;                 // pre-loop value

    IrBoolPtr guardIr;
    std::optional<BoolAtom> guardAtom; // guard as one atom over generic symbols
    bool guardAscending = false;      // continue iff iterator < bound
    bool guardDescending = false;     // continue iff iterator > bound
    std::optional<SymExpr> bound;     // free of generic symbols

    std::vector<LoopBodyPath> paths;  // every body path, break and normal
    std::vector<LoopWrite> writes;
    std::map<std::string, uint32_t> genericOf; // written scalar -> generic symbol
    std::set<std::string> writtenScalars;
    std::set<std::string> writtenArrays;
    std::set<std::string> readArrays;
    bool hasBreak = false;
    bool hasReturn = false;
    bool guardTriviallyTrue = false;

    bool mentionsOtherGenerics(const SymExpr& e) const; // generics besides iterSym
};

LoopInfo extractLoopInfo(AnalysisContext& ctx, const IrStmt& loop, const SymbolicPath& pre);

} // namespace arcs
