// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace arcs {

// Symbolic expressions in canonical affine normal form:
//     k + sum(coeff_i * atom_i)
// with atoms pairwise distinct and sorted by a total order. Two purely affine
// expressions are semantically equal under all valuations iff structurally
// equal. Reads, aggregates and nonlinear products are opaque atoms.

enum class SymOrigin {
    EntryValue, // value of a variable (or array length) at function entry
    LoopExit,   // value of a variable after a loop, when not closed-form
    Havoc,      // unconstrained (unresolvable read, havoc fallback)
    BoundIndex, // quantifier bound variable
    Placeholder // the segment-relative offset placeholder i_off
};

struct SymInfo {
    SymOrigin origin = SymOrigin::Havoc;
    std::string name; // source name hint
    int loopId = -1;
};

enum class AggOp { Sum, Max, Min };

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

struct SymExpr {
    long long k = 0;
    std::vector<std::pair<long long, AtomPtr>> terms;

    bool isConst() const { return terms.empty(); }
    std::optional<long long> asConst() const {
        if (terms.empty())
            return k;
        return std::nullopt;
    }
    bool isZero() const { return terms.empty() && k == 0; }
};

// Base is always a single base-constant atom; distinct variables and array
// blocks receive distinct base constants.
struct SymAddr {
    AtomPtr base;
    SymExpr offset;
};

struct SymAtom { uint32_t id = 0; };
struct ReadAtom { SymAddr addr; int epoch = 0; };
struct AggAtom { AggOp op = AggOp::Sum; SymAddr start; SymExpr len; };
struct ProdAtom { std::vector<AtomPtr> factors; }; // sorted, size >= 2
struct BaseAtom { uint32_t id = 0; std::string name; };
struct CurAtom { std::string name; }; // "current value of x" in loop clauses

struct Atom {
    std::variant<SymAtom, ReadAtom, AggAtom, ProdAtom, BaseAtom, CurAtom> v;
};

AtomPtr makeSymAtom(uint32_t id);
AtomPtr makeReadAtom(SymAddr addr, int epoch);
AtomPtr makeAggAtom(AggOp op, SymAddr start, SymExpr len);
AtomPtr makeBaseAtom(uint32_t id, std::string name);
AtomPtr makeCurAtom(std::string name);

int cmpAtom(const AtomPtr& a, const AtomPtr& b);
int cmpExpr(const SymExpr& a, const SymExpr& b);
inline bool atomEq(const AtomPtr& a, const AtomPtr& b) { return cmpAtom(a, b) == 0; }
inline bool exprEq(const SymExpr& a, const SymExpr& b) { return cmpExpr(a, b) == 0; }
bool addrEq(const SymAddr& a, const SymAddr& b);

struct AtomLess {
    bool operator()(const AtomPtr& a, const AtomPtr& b) const { return cmpAtom(a, b) < 0; }
};

SymExpr constExpr(long long k);
SymExpr atomExpr(AtomPtr a);
SymExpr symExpr(uint32_t symId);

SymExpr add(const SymExpr& a, const SymExpr& b);
SymExpr sub(const SymExpr& a, const SymExpr& b);
SymExpr neg(const SymExpr& a);
SymExpr mulConst(const SymExpr& a, long long c);
SymExpr mul(const SymExpr& a, const SymExpr& b);

// Simultaneous substitution of symbolic values (by id) and CurVar markers
// (by name), followed by renormalization.
struct Subst {
    std::map<uint32_t, SymExpr> syms;
    std::map<std::string, SymExpr> curVars;
    bool empty() const { return syms.empty() && curVars.empty(); }
};

SymExpr substitute(const SymExpr& e, const Subst& s);
SymAddr substitute(const SymAddr& a, const Subst& s);

void collectSyms(const SymExpr& e, std::set<uint32_t>& out);
bool mentionsSym(const SymExpr& e, uint32_t id);

// Stable textual rendering: "c0 + c1*s1 + ...".
std::string show(const SymExpr& e);
std::string show(const SymAddr& a);

} // namespace arcs
