// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "arcs/symexpr.hpp"

namespace arcs {

// --- path conditions ---

// Atoms are normalized against zero: e >= 0, e == 0, e != 0.
enum class Rel { Ge0, Eq0, Ne0 };

struct BoolAtom {
    Rel rel = Rel::Ge0;
    SymExpr e;
};

BoolAtom negate(const BoolAtom& a); // integer semantics: !(e>=0) is (-e-1>=0)
bool boolAtomEq(const BoolAtom& a, const BoolAtom& b);

// Q k in [lo,hi) . body, with k a fresh BoundIndex symbol occurring only in
// the body; range bounds are k-free.
struct QuantConstraint {
    bool forall = true;
    uint32_t var = 0;
    SymExpr lo, hi;
    BoolAtom body;
};

struct PcElem;

struct Disjunction {
    std::vector<std::vector<PcElem>> alts;
};

struct PcElem {
    std::variant<BoolAtom, QuantConstraint, Disjunction> v;
};

PcElem pcAtom(BoolAtom a);
PcElem pcQuant(QuantConstraint q);
PcElem pcDisj(Disjunction d);
bool pcElemEq(const PcElem& a, const PcElem& b);

struct PathCond {
    std::vector<PcElem> elems;
    size_t preMark = 0; // first preMark elements came from the declared precondition

    void conjoin(PcElem e); // structural dedup
    void conjoinAtom(BoolAtom a) { conjoin(pcAtom(std::move(a))); }
};

PcElem substitute(const PcElem& e, const Subst& s);
PathCond substitute(const PathCond& pc, const Subst& s);
std::string show(const BoolAtom& a);
std::string show(const PcElem& e);
std::string show(const PathCond& pc);

// --- symbolic state ---

// A memory cell holds either an integer-valued expression or an address
// (for pointer cells written by address-of / address arithmetic).
using MemVal = std::variant<SymExpr, SymAddr>;

struct MemEntry {
    SymAddr addr;
    MemVal val;
    bool fromWrite = false; // false: memoized entry-content read
};

struct MemoryMap {
    std::vector<MemEntry> entries;

    // Structural (exact) lookup only; alias-aware lookup lives in the executor
    // where the path condition is available.
    const MemEntry* findExact(const SymAddr& a) const;
    void put(const SymAddr& a, MemVal v, bool fromWrite);
    void eraseAt(size_t idx) { entries.erase(entries.begin() + static_cast<long>(idx)); }
};

struct AddressMap {
    std::map<std::string, SymAddr> m;

    const SymAddr* find(const std::string& var) const {
        auto it = m.find(var);
        return it == m.end() ? nullptr : &it->second;
    }
};

struct SymbolicState {
    MemoryMap mem;
    AddressMap addr;
    std::map<AtomPtr, int, AtomLess> epoch; // per-base havoc generation

    int epochOf(const AtomPtr& base) const {
        auto it = epoch.find(base);
        return it == epoch.end() ? 0 : it->second;
    }
};

} // namespace arcs
