// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/symstate.hpp"

#include "arcs/diagnostics.hpp"

namespace arcs {

BoolAtom negate(const BoolAtom& a) {
    switch (a.rel) {
    case Rel::Ge0: {
        SymExpr e = neg(a.e);
        e.k -= 1;
        return BoolAtom{Rel::Ge0, std::move(e)};
    }
    case Rel::Eq0: return BoolAtom{Rel::Ne0, a.e};
    case Rel::Ne0: return BoolAtom{Rel::Eq0, a.e};
    }
    return a;
}

bool boolAtomEq(const BoolAtom& a, const BoolAtom& b) {
    if (a.rel != b.rel)
        return false;
    if (a.rel == Rel::Ge0)
        return exprEq(a.e, b.e);
    // e==0 and -e==0 coincide; normalize sign by the first term.
    if (exprEq(a.e, b.e))
        return true;
    return exprEq(a.e, neg(b.e));
}

PcElem pcAtom(BoolAtom a) { return PcElem{std::move(a)}; }
PcElem pcQuant(QuantConstraint q) { return PcElem{std::move(q)}; }
PcElem pcDisj(Disjunction d) { return PcElem{std::move(d)}; }

bool pcElemEq(const PcElem& a, const PcElem& b) {
    if (a.v.index() != b.v.index())
        return false;
    switch (a.v.index()) {
    case 0: return boolAtomEq(std::get<BoolAtom>(a.v), std::get<BoolAtom>(b.v));
    case 1: {
        const auto& qa = std::get<QuantConstraint>(a.v);
        const auto& qb = std::get<QuantConstraint>(b.v);
        if (qa.forall != qb.forall || !exprEq(qa.lo, qb.lo) || !exprEq(qa.hi, qb.hi))
            return false;
        if (qa.var == qb.var)
            return boolAtomEq(qa.body, qb.body);
        // alpha-equivalence: rename both bound variables to a probe symbol
        constexpr uint32_t probe = 0xFFFFFFFFu;
        Subst sa, sb;
        sa.syms[qa.var] = symExpr(probe);
        sb.syms[qb.var] = symExpr(probe);
        return boolAtomEq(BoolAtom{qa.body.rel, substitute(qa.body.e, sa)},
                          BoolAtom{qb.body.rel, substitute(qb.body.e, sb)});
    }
    default: {
        const auto& da = std::get<Disjunction>(a.v);
        const auto& db = std::get<Disjunction>(b.v);
        if (da.alts.size() != db.alts.size())
            return false;
        for (size_t i = 0; i < da.alts.size(); ++i) {
            if (da.alts[i].size() != db.alts[i].size())
                return false;
            for (size_t j = 0; j < da.alts[i].size(); ++j)
                if (!pcElemEq(da.alts[i][j], db.alts[i][j]))
                    return false;
        }
        return true;
    }
    }
}

void PathCond::conjoin(PcElem e) {
    if (const auto* a = std::get_if<BoolAtom>(&e.v)) {
        // trivially-true atoms add nothing; trivially-false ones must stay
        // so the path gets pruned
        if (auto c = a->e.asConst()) {
            bool truth = a->rel == Rel::Ge0 ? *c >= 0 : a->rel == Rel::Eq0 ? *c == 0 : *c != 0;
            if (truth)
                return;
        }
    }
    for (const auto& have : elems)
        if (pcElemEq(have, e))
            return;
    elems.push_back(std::move(e));
}

PcElem substitute(const PcElem& e, const Subst& s) {
    switch (e.v.index()) {
    case 0: {
        const auto& a = std::get<BoolAtom>(e.v);
        return pcAtom(BoolAtom{a.rel, substitute(a.e, s)});
    }
    case 1: {
        QuantConstraint q = std::get<QuantConstraint>(e.v);
        if (s.syms.count(q.var))
            throw Error(ErrKind::Internal, "substitution would capture a bound variable");
        q.lo = substitute(q.lo, s);
        q.hi = substitute(q.hi, s);
        q.body.e = substitute(q.body.e, s);
        return pcQuant(std::move(q));
    }
    default: {
        Disjunction d = std::get<Disjunction>(e.v);
        for (auto& alt : d.alts)
            for (auto& el : alt)
                el = substitute(el, s);
        return pcDisj(std::move(d));
    }
    }
}

PathCond substitute(const PathCond& pc, const Subst& s) {
    PathCond out;
    out.preMark = pc.preMark;
    out.elems.reserve(pc.elems.size());
    for (const auto& e : pc.elems)
        out.elems.push_back(substitute(e, s));
    return out;
}

std::string show(const BoolAtom& a) {
    const char* rel = a.rel == Rel::Ge0 ? " >= 0" : a.rel == Rel::Eq0 ? " == 0" : " != 0";
    return show(a.e) + rel;
}

std::string show(const PcElem& e) {
    switch (e.v.index()) {
    case 0: return show(std::get<BoolAtom>(e.v));
    case 1: {
        const auto& q = std::get<QuantConstraint>(e.v);
        std::string s = q.forall ? "forall " : "exists ";
        s += "s" + std::to_string(q.var) + " in [" + show(q.lo) + "," + show(q.hi) + "). ";
        return s + show(q.body);
    }
    default: {
        const auto& d = std::get<Disjunction>(e.v);
        std::string s = "(";
        for (size_t i = 0; i < d.alts.size(); ++i) {
            if (i)
                s += " || ";
            s += "(";
            for (size_t j = 0; j < d.alts[i].size(); ++j) {
                if (j)
                    s += " && ";
                s += show(d.alts[i][j]);
            }
            s += ")";
        }
        return s + ")";
    }
    }
}

std::string show(const PathCond& pc) {
    std::string s;
    for (size_t i = 0; i < pc.elems.size(); ++i) {
        if (i)
            s += " && ";
        s += show(pc.elems[i]);
    }
    return s.empty() ? "true" : s;
}

const MemEntry* MemoryMap::findExact(const SymAddr& a) const {
    for (const auto& e : entries)
        if (addrEq(e.addr, a))
            return &e;
    return nullptr;
}

void MemoryMap::put(const SymAddr& a, MemVal v, bool fromWrite) {
    for (auto& e : entries) {
        if (addrEq(e.addr, a)) {
            e.val = std::move(v);
            e.fromWrite = e.fromWrite || fromWrite;
            return;
        }
    }
    entries.push_back(MemEntry{a, std::move(v), fromWrite});
}

} // namespace arcs
