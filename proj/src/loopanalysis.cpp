// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/loopanalysis.hpp"

#include <algorithm>

#include "arcs/compare.hpp"

namespace arcs {

PluginRegistry PluginRegistry::fromNames(const std::vector<std::string>& names) {
    PluginRegistry r;
    r.search = r.maxmin = r.affine = r.fill = false;
    for (const auto& n : names) {
        if (n == "search") r.search = true;
        else if (n == "maxmin") r.maxmin = true;
        else if (n == "affine") r.affine = true;
        else if (n == "fill") r.fill = true;
        else if (n == "assigns") { /* always on */ }
        else throw Error(ErrKind::Parse, "unknown plugin '" + n + "'");
    }
    return r;
}

bool clauseEq(const InvariantClause& a, const InvariantClause& b) {
    if (a.kind != b.kind || a.plugin != b.plugin)
        return false;
    switch (a.kind) {
    case InvariantClause::Kind::RangeInvariant:
        return a.iterVar == b.iterVar && exprEq(a.lo, b.lo) && a.hi.has_value() == b.hi.has_value() &&
               (!a.hi || exprEq(*a.hi, *b.hi));
    case InvariantClause::Kind::Invariant:
        return a.formula && b.formula && pcElemEq(*a.formula, *b.formula);
    case InvariantClause::Kind::LoopAssigns: {
        if (a.scalars != b.scalars || a.ranges.size() != b.ranges.size())
            return false;
        for (size_t i = 0; i < a.ranges.size(); ++i)
            if (a.ranges[i].array != b.ranges[i].array || !exprEq(a.ranges[i].lo, b.ranges[i].lo) ||
                !exprEq(a.ranges[i].hiIncl, b.ranges[i].hiIncl))
                return false;
        return true;
    }
    }
    return false;
}

namespace {

SymExpr preScalar(const SymbolicPath& pre, const std::string& x) {
    const SymAddr* a = pre.state.addr.find(x);
    if (!a)
        throw Error(ErrKind::UnboundVariable, "unbound variable '" + x + "'");
    const MemEntry* e = pre.state.mem.findExact(*a);
    if (!e || !std::holds_alternative<SymExpr>(e->val))
        throw Error(ErrKind::UnboundVariable, "no scalar value for '" + x + "'");
    return std::get<SymExpr>(e->val);
}

BoolAtom atomAt(const LoopInfo& info, const BoolAtom& atom, const SymExpr& iterVal) {
    Subst s;
    s.syms[info.iterSym] = iterVal;
    return BoolAtom{atom.rel, substitute(atom.e, s)};
}

BoolAtom substGenerics(const LoopInfo& info, const BoolAtom& atom,
                       const std::map<std::string, SymExpr>& bindings) {
    Subst s;
    for (const auto& [v, g] : info.genericOf) {
        auto it = bindings.find(v);
        if (it != bindings.end())
            s.syms[g] = it->second;
    }
    return BoolAtom{atom.rel, substitute(atom.e, s)};
}

bool triviallyTrue(const BoolAtom& a) {
    auto c = a.e.asConst();
    if (!c)
        return false;
    switch (a.rel) {
    case Rel::Ge0: return *c >= 0;
    case Rel::Eq0: return *c == 0;
    case Rel::Ne0: return *c != 0;
    }
    return false;
}

void conjoinNontrivial(std::vector<PcElem>& conds, BoolAtom a) {
    if (!triviallyTrue(a))
        conds.push_back(pcAtom(std::move(a)));
}

// ---- loop assigns: footprint over-approximation ----

struct WritePattern {
    AtomPtr base;
    std::string array;
    long long stride = 0;  // coefficient of the iterator
    SymExpr rest;          // pattern minus stride*iter, split as rest + residue
    long long residue = 0;
    bool ok = false;
};

std::optional<WritePattern> patternOf(const LoopInfo& info, const LoopWrite& w) {
    if (!w.patternOk)
        return std::nullopt;
    WritePattern p;
    p.base = w.base;
    p.array = w.array;
    SymExpr rest = w.offset;
    for (size_t i = 0; i < rest.terms.size(); ++i) {
        const auto* sa = std::get_if<SymAtom>(&rest.terms[i].second->v);
        if (sa && sa->id == info.iterSym) {
            p.stride = rest.terms[i].first;
            rest.terms.erase(rest.terms.begin() + static_cast<long>(i));
            break;
        }
    }
    // remaining pattern must not mention the iterator nonlinearly
    if (mentionsSym(rest, info.iterSym))
        return std::nullopt;
    p.residue = rest.k;
    rest.k = 0;
    p.rest = std::move(rest);
    p.ok = true;
    return p;
}

// Patterns with the same stride and symbolic part whose residues form a
// complete run merge into one stride-wide block.
struct PatternGroup {
    AtomPtr base;
    std::string array;
    long long stride = 0;
    SymExpr rest;
    std::vector<long long> residues; // singleton after grouping unless complete
    long long width = 1;
};

struct GroupedWrites {
    std::vector<PatternGroup> groups;
    std::set<std::string> degraded; // whole-array fallback
};

GroupedWrites groupWrites(const LoopInfo& info) {
    GroupedWrites out;
    struct Raw {
        AtomPtr base;
        std::string array;
        long long stride;
        SymExpr rest;
        std::set<long long> residues;
    };
    std::vector<Raw> raws;
    for (const auto& w : info.writes) {
        auto p = patternOf(info, w);
        if (!p) {
            out.degraded.insert(w.array);
            continue;
        }
        bool merged = false;
        for (auto& g : raws) {
            if (atomEq(g.base, p->base) && g.stride == p->stride && exprEq(g.rest, p->rest)) {
                g.residues.insert(p->residue);
                merged = true;
                break;
            }
        }
        if (!merged)
            raws.push_back(Raw{p->base, p->array, p->stride, p->rest, {p->residue}});
    }
    for (const auto& g : raws) {
        long long r0 = *g.residues.begin();
        long long rn = *g.residues.rbegin();
        bool completeRun = g.stride != 0 &&
                           rn - r0 + 1 == static_cast<long long>(g.residues.size()) &&
                           static_cast<long long>(g.residues.size()) == std::llabs(g.stride);
        if (completeRun) {
            out.groups.push_back(
                PatternGroup{g.base, g.array, g.stride, g.rest, {r0}, std::llabs(g.stride)});
        } else {
            for (long long res : g.residues)
                out.groups.push_back(PatternGroup{g.base, g.array, g.stride, g.rest, {res}, 1});
        }
    }
    return out;
}

// Ranges clobbered by one exit, given the iterator's exit value; non-affine
// patterns fall back to the whole array.
std::vector<HavocRange> assignsRanges(const AnalysisContext& ctx, const LoopInfo& info,
                                      const SymbolicPath& pre, const SymExpr& iterExit) {
    std::vector<HavocRange> out;
    GroupedWrites gw = groupWrites(info);
    for (const auto& array : gw.degraded) {
        auto lenSym = ctx.lenSymOfArray.find(array);
        auto baseIt = ctx.blockBaseOfArray.find(array);
        if (baseIt == ctx.blockBaseOfArray.end())
            continue;
        HavocRange r;
        r.base = baseIt->second;
        r.array = array;
        r.lo = constExpr(0);
        r.hi = lenSym != ctx.lenSymOfArray.end() ? symExpr(lenSym->second) : constExpr(0);
        r.wholeArray = true;
        out.push_back(std::move(r));
    }
    for (const auto& g : gw.groups) {
        if (gw.degraded.count(g.array))
            continue;
        long long residue = g.residues[0];
        if (g.stride == 0) {
            HavocRange r;
            r.base = g.base;
            r.array = g.array;
            r.lo = add(g.rest, constExpr(residue));
            r.hi = add(r.lo, constExpr(1));
            out.push_back(std::move(r));
            continue;
        }
        // f(it) = stride*it + rest + residue, executed for it = init .. exit-step
        SymExpr fInit = add(mulConst(info.iterInit, g.stride), add(g.rest, constExpr(residue)));
        SymExpr lastIter = sub(iterExit, constExpr(info.step));
        SymExpr fLast = add(mulConst(lastIter, g.stride), add(g.rest, constExpr(residue)));
        HavocRange r;
        r.base = g.base;
        r.array = g.array;
        if (g.stride * info.step > 0) { // pattern moves up along execution
            r.lo = fInit;
            r.hi = add(fLast, constExpr(g.width));
        } else {
            r.lo = fLast;
            r.hi = add(fInit, constExpr(g.width));
        }
        SymExpr len = sub(r.hi, r.lo);
        if (auto c = len.asConst(); c && *c <= 0)
            continue;
        out.push_back(std::move(r));
    }
    (void)pre;
    return out;
}

// assigns annotation clause (inclusive ends; iterator current value when no bound)
InvariantClause assignsClause(const AnalysisContext& ctx, const LoopInfo& info) {
    InvariantClause c;
    c.kind = InvariantClause::Kind::LoopAssigns;
    c.plugin = "assigns";
    for (const auto& v : info.writtenScalars)
        c.scalars.push_back(v);
    std::sort(c.scalars.begin(), c.scalars.end());

    GroupedWrites gw = groupWrites(info);
    auto whole = [&](const std::string& array) {
        auto lenSym = ctx.lenSymOfArray.find(array);
        SymExpr len = lenSym != ctx.lenSymOfArray.end() ? symExpr(lenSym->second) : constExpr(0);
        return AssignsTerm{array, constExpr(0), sub(len, constExpr(1))};
    };
    auto push = [&](AssignsTerm t) {
        for (const auto& have : c.ranges)
            if (have.array == t.array && exprEq(have.lo, t.lo) && exprEq(have.hiIncl, t.hiIncl))
                return;
        c.ranges.push_back(std::move(t));
    };
    for (const auto& array : gw.degraded)
        push(whole(array));
    for (const auto& g : gw.groups) {
        if (gw.degraded.count(g.array))
            continue;
        long long residue = g.residues[0];
        if (g.stride * info.step < 0) { // moves down: bound the hull by the whole array
            push(whole(g.array));
            continue;
        }
        SymExpr fInit = add(mulConst(info.iterInit, g.stride), add(g.rest, constExpr(residue)));
        SymExpr hiIncl;
        if (g.stride == 0) {
            hiIncl = fInit;
        } else if (info.bound && std::llabs(info.step) == 1) {
            SymExpr lastIter = sub(*info.bound, constExpr(info.step));
            hiIncl = add(mulConst(lastIter, g.stride),
                         add(g.rest, constExpr(residue + g.width - 1)));
        } else {
            hiIncl = add(mulConst(atomExpr(makeCurAtom(info.iterator)), g.stride),
                         add(g.rest, constExpr(residue + g.width - 1)));
        }
        push(AssignsTerm{g.array, fInit, hiIncl});
    }
    return c;
}

// ---- affine clauses ----

// Per-iteration change of a scalar: must be identical on every non-break body
// path, free of generic symbols (so also iterator-independent), and must not
// read arrays the loop writes.
std::optional<SymExpr> perIterDelta(const AnalysisContext& ctx, const LoopInfo& info,
                                    const std::string& v, uint32_t g) {
    std::optional<SymExpr> delta;
    for (const auto& p : info.paths) {
        if (p.broke)
            continue;
        auto it = p.finalEnv.find(v);
        SymExpr fin = it == p.finalEnv.end() ? symExpr(g) : it->second;
        SymExpr d = sub(fin, symExpr(g));
        if (mentionsSym(d, info.iterSym) || info.mentionsOtherGenerics(d))
            return std::nullopt;
        std::vector<AtomPtr> stack;
        for (const auto& [cf, at] : d.terms)
            stack.push_back(at);
        while (!stack.empty()) {
            AtomPtr a = stack.back();
            stack.pop_back();
            if (const auto* r = std::get_if<ReadAtom>(&a->v)) {
                if (info.writtenArrays.count(ctx.arrayOfBase(r->addr.base)))
                    return std::nullopt;
            } else if (const auto* pr = std::get_if<ProdAtom>(&a->v)) {
                for (const auto& f : pr->factors)
                    stack.push_back(f);
            }
        }
        if (delta && !exprEq(*delta, d))
            return std::nullopt;
        delta = d;
    }
    return delta;
}

// delta * (iterVal - init) / step, expressible when |step| == 1 or the delta
// is a constant multiple of the step
std::optional<SymExpr> accumulated(const LoopInfo& info, const SymExpr& delta,
                                   const SymExpr& iterVal) {
    SymExpr span = sub(iterVal, info.iterInit);
    if (info.step == 1)
        return mul(delta, span);
    if (info.step == -1)
        return neg(mul(delta, span));
    auto c = delta.asConst();
    if (c && *c % info.step == 0)
        return mulConst(span, *c / info.step);
    return std::nullopt;
}

void affineClauses(const AnalysisContext& ctx, const LoopInfo& info, const SymbolicPath& pre,
                   std::vector<InvariantClause>& out) {
    InvariantClause range;
    range.kind = InvariantClause::Kind::RangeInvariant;
    range.plugin = "affine";
    range.iterVar = info.iterator;
    if (info.step > 0) {
        range.lo = info.iterInit;
        if (info.step == 1 && info.bound)
            range.hi = *info.bound;
    } else {
        if (info.step == -1 && info.bound)
            range.lo = *info.bound;
        else
            range.lo = SymExpr{}; // marker below
        range.hi = info.iterInit;
        if (!info.bound || info.step != -1) {
            // no derivable lower end: emit only iter <= init
            range.lo = info.iterInit;
            range.iterVar = info.iterator;
            InvariantClause upper;
            upper.kind = InvariantClause::Kind::Invariant;
            upper.plugin = "affine";
            upper.formula = pcAtom(BoolAtom{
                Rel::Ge0, sub(info.iterInit, atomExpr(makeCurAtom(info.iterator)))});
            out.push_back(std::move(upper));
            goto scalars;
        }
    }
    out.push_back(range);

scalars:
    for (const auto& [v, g] : info.genericOf) {
        if (v == info.iterator)
            continue;
        auto delta = perIterDelta(ctx, info, v, g);
        if (!delta)
            continue;
        auto acc = accumulated(info, *delta, atomExpr(makeCurAtom(info.iterator)));
        if (!acc)
            continue;
        // v == v0 + delta * (iter - init) / step
        SymExpr rhs = add(preScalar(pre, v), *acc);
        InvariantClause c;
        c.kind = InvariantClause::Kind::Invariant;
        c.plugin = "affine";
        c.formula = pcAtom(BoolAtom{Rel::Eq0, sub(atomExpr(makeCurAtom(v)), rhs)});
        out.push_back(std::move(c));
    }
}

// closed-form scalar bindings at iterator exit value; havoc symbol otherwise
std::map<std::string, SymExpr> scalarBindings(AnalysisContext& ctx, const LoopInfo& info,
                                              const SymbolicPath& pre, const SymExpr& iterExit,
                                              int loopId) {
    std::map<std::string, SymExpr> b;
    for (const auto& [v, g] : info.genericOf) {
        if (v == info.iterator) {
            b[v] = iterExit;
            continue;
        }
        auto delta = perIterDelta(ctx, info, v, g);
        auto acc = delta ? accumulated(info, *delta, iterExit) : std::nullopt;
        if (acc)
            b[v] = add(preScalar(pre, v), *acc);
        else
            b[v] = symExpr(ctx.freshSym(SymOrigin::LoopExit, v, loopId));
    }
    return b;
}

// ---- fill refinement ----

void fillFacts(const AnalysisContext& ctx, const LoopInfo& info, const SymExpr& iterExit,
               LoopExit& exit) {
    if (info.hasBreak || info.paths.size() != 1 || info.step != 1)
        return;
    // exactly one write per base, unconditional, unit stride, value independent
    // of written arrays
    std::map<std::string, int> writeCount;
    for (const auto& w : info.writes)
        writeCount[w.array]++;
    for (const auto& w : info.writes) {
        if (writeCount[w.array] != 1 || !w.patternOk || !w.conds.empty())
            continue;
        auto p = patternOf(info, w);
        if (!p || p->stride != 1)
            continue;
        std::set<uint32_t> valueSyms;
        collectSyms(w.value, valueSyms);
        bool readsWritten = false;
        std::vector<AtomPtr> stack;
        for (const auto& [cf, atom] : w.value.terms)
            stack.push_back(atom);
        while (!stack.empty()) {
            AtomPtr a = stack.back();
            stack.pop_back();
            if (const auto* r = std::get_if<ReadAtom>(&a->v)) {
                if (info.writtenArrays.count(ctx.arrayOfBase(r->addr.base)))
                    readsWritten = true;
            } else if (const auto* pr = std::get_if<ProdAtom>(&a->v)) {
                for (const auto& f : pr->factors)
                    stack.push_back(f);
            }
        }
        if (readsWritten)
            continue;
        SymExpr restFull = add(p->rest, constExpr(p->residue));
        SymExpr lo = add(info.iterInit, restFull);
        SymExpr hi = add(iterExit, restFull);
        if (auto c = sub(hi, lo).asConst(); c && *c <= 0)
            continue;
        // phi(i_off) = value at iter = init + i_off
        Subst s;
        s.syms[info.iterSym] = add(info.iterInit, symExpr(ctx.placeholderSym()));
        FillFact f{w.base, w.array, lo, hi, substitute(w.value, s)};
        exit.fills.push_back(std::move(f));
    }
}

// fill loop invariant: forall k in [lo, cur(iter)+rest). a[k] == phi
void fillClauses(AnalysisContext& ctx, const LoopInfo& info, const SymbolicPath& pre,
                 std::vector<InvariantClause>& out) {
    LoopExit probe;
    // pattern coverage up to the current iterator value
    fillFacts(ctx, info, atomExpr(makeCurAtom(info.iterator)), probe);
    for (const auto& f : probe.fills) {
        uint32_t k = ctx.freshSym(SymOrigin::BoundIndex, "k", info.loopId);
        Subst ph;
        ph.syms[ctx.placeholderSym()] = sub(symExpr(k), f.lo);
        SymExpr rhs = substitute(f.phi, ph);
        SymExpr cell = atomExpr(makeReadAtom(SymAddr{f.base, symExpr(k)},
                                             pre.state.epochOf(f.base)));
        QuantConstraint q;
        q.forall = true;
        q.var = k;
        q.lo = f.lo;
        q.hi = f.hi;
        q.body = BoolAtom{Rel::Eq0, sub(cell, rhs)};
        InvariantClause c;
        c.kind = InvariantClause::Kind::Invariant;
        c.plugin = "fill";
        c.formula = pcQuant(std::move(q));
        out.push_back(std::move(c));
    }
}

// ---- search pattern (priority 30) ----

struct SearchMatch {
    BoolAtom cond;        // break condition over iterSym (single read at offset iter)
    AtomPtr arrayBase;
    std::string arrayName;
};

std::optional<SearchMatch> matchSearch(const AnalysisContext& ctx, const LoopInfo& info) {
    if (!info.recognized || !info.hasBreak || info.step != 1 || !info.guardAscending ||
        !info.bound || info.paths.size() != 2)
        return std::nullopt;
    const LoopBodyPath* brk = nullptr;
    const LoopBodyPath* normal = nullptr;
    for (const auto& p : info.paths) {
        if (p.broke)
            brk = &p;
        else
            normal = &p;
    }
    if (!brk || !normal || !brk->condsAtomic || brk->conds.size() != 1)
        return std::nullopt;
    if (!brk->finalEnv.empty()) {
        // writes before the break are outside the pattern, except the untouched
        // generic identities
        for (const auto& [v, e] : brk->finalEnv)
            if (!exprEq(e, symExpr(info.genericOf.at(v))))
                return std::nullopt;
    }
    // the normal path must write only the iterator
    for (const auto& [v, e] : normal->finalEnv) {
        if (v == info.iterator)
            continue;
        if (!exprEq(e, symExpr(info.genericOf.at(v))))
            return std::nullopt;
    }
    if (!info.writtenArrays.empty())
        return std::nullopt;
    const BoolAtom& cond = brk->conds[0];
    if (info.mentionsOtherGenerics(cond.e))
        return std::nullopt;
    // exactly one read atom, at offset == iterator
    std::vector<const ReadAtom*> reads;
    for (const auto& [c, a] : cond.e.terms)
        if (const auto* r = std::get_if<ReadAtom>(&a->v))
            reads.push_back(r);
    if (reads.size() != 1)
        return std::nullopt;
    if (!exprEq(reads[0]->addr.offset, symExpr(info.iterSym)))
        return std::nullopt;
    SearchMatch m;
    m.cond = cond;
    m.arrayBase = reads[0]->addr.base;
    m.arrayName = ctx.arrayOfBase(reads[0]->addr.base);
    if (m.arrayName.empty())
        return std::nullopt;
    return m;
}

QuantConstraint quantOver(AnalysisContext& ctx, const LoopInfo& info, const BoolAtom& body,
                          SymExpr lo, SymExpr hi, bool forall, int loopId) {
    uint32_t k = ctx.freshSym(SymOrigin::BoundIndex, forall ? "k" : "w", loopId);
    Subst s;
    s.syms[info.iterSym] = symExpr(k);
    QuantConstraint q;
    q.forall = forall;
    q.var = k;
    q.lo = std::move(lo);
    q.hi = std::move(hi);
    q.body = BoolAtom{body.rel, substitute(body.e, s)};
    return q;
}

// ---- max/min pattern (priority 20) ----

struct MaxMinMatch {
    std::string target;       // m
    bool isMax = false;       // if (m < a[i]) m = a[i];  (min: >)
    AtomPtr arrayBase;
    std::string arrayName;
    SymExpr witnessLo;        // lower end of the quantified range
    bool witnessValid = false;
};

std::optional<MaxMinMatch> matchMaxMin(const AnalysisContext& ctx, const LoopInfo& info,
                                       const SymbolicPath& pre) {
    if (!info.recognized || info.hasBreak || info.step != 1 || !info.guardAscending ||
        !info.bound || info.paths.size() != 2)
        return std::nullopt;
    if (!info.writtenArrays.empty())
        return std::nullopt;
    std::vector<std::string> written;
    for (const auto& [v, g] : info.genericOf)
        if (v != info.iterator)
            written.push_back(v);
    if (written.size() != 1)
        return std::nullopt;
    const std::string m = written[0];
    uint32_t gm = info.genericOf.at(m);

    const LoopBodyPath* upd = nullptr;
    const LoopBodyPath* keep = nullptr;
    for (const auto& p : info.paths) {
        auto it = p.finalEnv.find(m);
        bool changed = it != p.finalEnv.end() && !exprEq(it->second, symExpr(gm));
        if (changed)
            upd = &p;
        else
            keep = &p;
    }
    if (!upd || !keep || !upd->condsAtomic || upd->conds.size() != 1)
        return std::nullopt;

    // update must set m to a read of an unwritten array at offset iter
    SymExpr newVal = upd->finalEnv.at(m);
    if (newVal.terms.size() != 1 || newVal.k != 0 || newVal.terms[0].first != 1)
        return std::nullopt;
    const auto* read = std::get_if<ReadAtom>(&newVal.terms[0].second->v);
    if (!read || !exprEq(read->addr.offset, symExpr(info.iterSym)))
        return std::nullopt;

    // condition shape: m < a[i]  <=>  a[i] - m - 1 >= 0 (max), dual for min
    const BoolAtom& c = upd->conds[0];
    if (c.rel != Rel::Ge0 || c.e.k != -1 || c.e.terms.size() != 2)
        return std::nullopt;
    long long readCoeff = 0, mCoeff = 0;
    for (const auto& [cf, a] : c.e.terms) {
        if (const auto* r = std::get_if<ReadAtom>(&a->v)) {
            if (!addrEq(r->addr, read->addr) || r->epoch != read->epoch)
                return std::nullopt;
            readCoeff = cf;
        } else if (const auto* sa = std::get_if<SymAtom>(&a->v)) {
            if (sa->id != gm)
                return std::nullopt;
            mCoeff = cf;
        } else {
            return std::nullopt;
        }
    }
    MaxMinMatch match;
    if (readCoeff == 1 && mCoeff == -1)
        match.isMax = true;
    else if (readCoeff == -1 && mCoeff == 1)
        match.isMax = false;
    else
        return std::nullopt;

    match.target = m;
    match.arrayBase = read->addr.base;
    match.arrayName = ctx.arrayOfBase(read->addr.base);
    if (match.arrayName.empty())
        return std::nullopt;

    // witness range: when m starts as a[init-1], widen the range to cover it
    match.witnessLo = info.iterInit;
    SymExpr m0 = preScalar(pre, m);
    if (m0.k == 0 && m0.terms.size() == 1 && m0.terms[0].first == 1) {
        if (const auto* r0 = std::get_if<ReadAtom>(&m0.terms[0].second->v)) {
            if (atomEq(r0->addr.base, match.arrayBase)) {
                SymExpr gap = sub(info.iterInit, r0->addr.offset);
                if (auto g = gap.asConst(); g && *g == 1) {
                    match.witnessLo = r0->addr.offset;
                    match.witnessValid = true;
                }
            }
        }
    }
    return match;
}

} // namespace

LoopSummary analyzeLoop(AnalysisContext& ctx, const IrStmt& loop, const SymbolicPath& pre,
                        const PluginRegistry& reg) {
    ctx.checkDeadline();
    LoopSummary out;
    LoopInfo info = extractLoopInfo(ctx, loop, pre);
    const int loopId = loop.loopId;

    if (info.guardTriviallyTrue && !info.hasBreak && !info.hasReturn) {
        out.fail = true;
        out.failReason = "loop has no derivable exit";
        return out;
    }

    auto zeroExit = [&]() {
        LoopExit e;
        e.kind = LoopExit::Kind::Normal;
        for (const auto& [v, g] : info.genericOf)
            e.bindings[v] = preScalar(pre, v);
        if (info.guardAtom) {
            BoolAtom atEntry = substGenerics(info, *info.guardAtom, e.bindings);
            conjoinNontrivial(e.conds, negate(atEntry));
        }
        return e;
    };

    auto attachAssigns = [&](LoopExit& e, const SymExpr& iterExit) {
        e.havocs = assignsRanges(ctx, info, pre, iterExit);
        if (reg.fill)
            fillFacts(ctx, info, iterExit, e);
    };

    std::optional<SearchMatch> search = reg.search ? matchSearch(ctx, info) : std::nullopt;
    std::optional<MaxMinMatch> maxmin =
        !search && reg.maxmin ? matchMaxMin(ctx, info, pre) : std::nullopt;

    if (search) {
        out.principal = "search";
        const SymExpr& init = info.iterInit;
        const SymExpr& bound = *info.bound;
        BoolAtom notCond = negate(search->cond);

        out.exits.push_back(zeroExit());

        LoopExit normal;
        normal.kind = LoopExit::Kind::Normal;
        normal.bindings = scalarBindings(ctx, info, pre, bound, loopId);
        conjoinNontrivial(normal.conds, BoolAtom{Rel::Ge0, [&] {
                              SymExpr d = sub(bound, init);
                              d.k -= 1;
                              return d;
                          }()}); // entered: init < bound
        normal.conds.push_back(
            pcQuant(quantOver(ctx, info, notCond, init, bound, true, loopId)));
        attachAssigns(normal, bound);
        out.exits.push_back(std::move(normal));

        uint32_t sb = ctx.freshSym(SymOrigin::LoopExit, info.iterator, loopId);
        SymExpr sbe = symExpr(sb);
        LoopExit brk;
        brk.kind = LoopExit::Kind::Break;
        brk.bindings = scalarBindings(ctx, info, pre, sbe, loopId);
        conjoinNontrivial(brk.conds, BoolAtom{Rel::Ge0, sub(sbe, init)});           // init <= i
        conjoinNontrivial(brk.conds, BoolAtom{Rel::Ge0, [&] {
                              SymExpr d = sub(bound, sbe);
                              d.k -= 1;
                              return d;
                          }()});                                                    // i < bound
        conjoinNontrivial(brk.conds, atomAt(info, search->cond, sbe));              // cond(i)
        brk.conds.push_back(pcQuant(quantOver(ctx, info, notCond, init, sbe, true, loopId)));
        brk.conds.push_back(pcQuant(quantOver(ctx, info, search->cond, init,
                                              add(sbe, constExpr(1)), false, loopId)));
        attachAssigns(brk, sbe);
        out.exits.push_back(std::move(brk));

        InvariantClause inv;
        inv.kind = InvariantClause::Kind::Invariant;
        inv.plugin = "search";
        inv.formula = pcQuant(
            quantOver(ctx, info, notCond, init, atomExpr(makeCurAtom(info.iterator)), true, loopId));
        out.clauses.push_back(std::move(inv));
    } else if (maxmin) {
        out.principal = "maxmin";
        const SymExpr& init = info.iterInit;
        const SymExpr& bound = *info.bound;

        out.exits.push_back(zeroExit());

        LoopExit entered;
        entered.kind = LoopExit::Kind::Normal;
        entered.bindings = scalarBindings(ctx, info, pre, bound, loopId);
        uint32_t sm = ctx.freshSym(SymOrigin::LoopExit, maxmin->target, loopId);
        entered.bindings[maxmin->target] = symExpr(sm);
        conjoinNontrivial(entered.conds, BoolAtom{Rel::Ge0, [&] {
                              SymExpr d = sub(bound, init);
                              d.k -= 1;
                              return d;
                          }()});
        // forall k in [lo, bound). a[k] <= m  (>= for min)
        uint32_t k = ctx.freshSym(SymOrigin::BoundIndex, "k", loopId);
        SymExpr cell = atomExpr(makeReadAtom(SymAddr{maxmin->arrayBase, symExpr(k)},
                                             pre.state.epochOf(maxmin->arrayBase)));
        SymExpr diff = maxmin->isMax ? sub(symExpr(sm), cell) : sub(cell, symExpr(sm));
        QuantConstraint bnd;
        bnd.forall = true;
        bnd.var = k;
        bnd.lo = maxmin->witnessLo;
        bnd.hi = bound;
        bnd.body = BoolAtom{Rel::Ge0, diff};
        entered.conds.push_back(pcQuant(bnd));
        if (maxmin->witnessValid) {
            uint32_t j = ctx.freshSym(SymOrigin::BoundIndex, "j", loopId);
            SymExpr cellJ = atomExpr(makeReadAtom(SymAddr{maxmin->arrayBase, symExpr(j)},
                                                  pre.state.epochOf(maxmin->arrayBase)));
            QuantConstraint wit;
            wit.forall = false;
            wit.var = j;
            wit.lo = maxmin->witnessLo;
            wit.hi = bound;
            wit.body = BoolAtom{Rel::Eq0, sub(symExpr(sm), cellJ)};
            entered.conds.push_back(pcQuant(wit));
        }
        attachAssigns(entered, bound);
        out.exits.push_back(std::move(entered));

        // clauses at the loop head
        uint32_t kc = ctx.freshSym(SymOrigin::BoundIndex, "k", loopId);
        SymExpr cellK = atomExpr(makeReadAtom(SymAddr{maxmin->arrayBase, symExpr(kc)},
                                              pre.state.epochOf(maxmin->arrayBase)));
        SymExpr diffC = maxmin->isMax ? sub(atomExpr(makeCurAtom(maxmin->target)), cellK)
                                      : sub(cellK, atomExpr(makeCurAtom(maxmin->target)));
        InvariantClause invB;
        invB.kind = InvariantClause::Kind::Invariant;
        invB.plugin = "maxmin";
        QuantConstraint qb;
        qb.forall = true;
        qb.var = kc;
        qb.lo = maxmin->witnessLo;
        qb.hi = atomExpr(makeCurAtom(info.iterator));
        qb.body = BoolAtom{Rel::Ge0, diffC};
        invB.formula = pcQuant(qb);
        out.clauses.push_back(std::move(invB));
        if (maxmin->witnessValid) {
            uint32_t jc = ctx.freshSym(SymOrigin::BoundIndex, "j", loopId);
            SymExpr cellJ = atomExpr(makeReadAtom(SymAddr{maxmin->arrayBase, symExpr(jc)},
                                                  pre.state.epochOf(maxmin->arrayBase)));
            InvariantClause invW;
            invW.kind = InvariantClause::Kind::Invariant;
            invW.plugin = "maxmin";
            QuantConstraint qw;
            qw.forall = false;
            qw.var = jc;
            qw.lo = maxmin->witnessLo;
            qw.hi = atomExpr(makeCurAtom(info.iterator));
            qw.body = BoolAtom{Rel::Eq0, sub(atomExpr(makeCurAtom(maxmin->target)), cellJ)};
            invW.formula = pcQuant(qw);
            out.clauses.push_back(std::move(invW));
        }
    } else if (info.recognized && !info.hasBreak) {
        out.principal = "affine";
        out.exits.push_back(zeroExit());

        LoopExit entered;
        entered.kind = LoopExit::Kind::Normal;
        SymExpr iterExit;
        if (std::llabs(info.step) == 1 && info.bound) {
            iterExit = *info.bound;
        } else {
            uint32_t se = ctx.freshSym(SymOrigin::LoopExit, info.iterator, loopId);
            iterExit = symExpr(se);
        }
        entered.bindings = scalarBindings(ctx, info, pre, iterExit, loopId);
        if (info.guardAtom) {
            BoolAtom atEntry = substGenerics(info, *info.guardAtom,
                                             [&] {
                                                 std::map<std::string, SymExpr> b;
                                                 for (const auto& [v, g] : info.genericOf)
                                                     b[v] = preScalar(pre, v);
                                                 b[info.iterator] = info.iterInit;
                                                 return b;
                                             }());
            conjoinNontrivial(entered.conds, atEntry); // loop entered
            BoolAtom atExit = substGenerics(info, *info.guardAtom, entered.bindings);
            conjoinNontrivial(entered.conds, negate(atExit));
            if (!info.mentionsOtherGenerics(info.guardAtom->e)) {
                // guard still held when the final iteration started
                std::map<std::string, SymExpr> prevBind = entered.bindings;
                prevBind[info.iterator] = sub(iterExit, constExpr(info.step));
                conjoinNontrivial(entered.conds,
                                  substGenerics(info, *info.guardAtom, prevBind));
            }
            // progress: at least one full step
            SymExpr prog = info.step > 0 ? sub(iterExit, add(info.iterInit, constExpr(info.step)))
                                         : sub(add(info.iterInit, constExpr(info.step)), iterExit);
            conjoinNontrivial(entered.conds, BoolAtom{Rel::Ge0, prog});
        }
        attachAssigns(entered, iterExit);
        out.exits.push_back(std::move(entered));
    } else {
        // havoc fallback: single exit, every written scalar unconstrained
        out.principal = "havoc";
        LoopExit e;
        e.kind = info.hasBreak ? LoopExit::Kind::Break : LoopExit::Kind::Normal;
        std::set<std::string> scalars = info.writtenScalars;
        for (const auto& v : scalars)
            e.bindings[v] = symExpr(ctx.freshSym(SymOrigin::LoopExit, v, loopId));
        if (!info.hasBreak && !info.hasReturn && info.guardAtom) {
            bool allBound = true;
            for (const auto& [v, g] : info.genericOf)
                if (!e.bindings.count(v))
                    allBound = false;
            if (allBound)
                conjoinNontrivial(e.conds, negate(substGenerics(info, *info.guardAtom, e.bindings)));
        }
        // footprint: whole arrays for anything written
        for (const auto& ar : info.writtenArrays) {
            auto itBase = ctx.blockBaseOfArray.find(ar);
            auto itLen = ctx.lenSymOfArray.find(ar);
            HavocRange r;
            r.base = itBase->second;
            r.array = ar;
            r.lo = constExpr(0);
            r.hi = itLen != ctx.lenSymOfArray.end() ? symExpr(itLen->second) : constExpr(0);
            r.wholeArray = true;
            e.havocs.push_back(std::move(r));
        }
        out.exits.push_back(std::move(e));
    }

    // path-insensitive clause plugins
    if (info.recognized && reg.affine)
        affineClauses(ctx, info, pre, out.clauses);
    if (info.recognized && reg.fill && !info.hasBreak)
        fillClauses(ctx, info, pre, out.clauses);
    out.clauses.push_back(assignsClause(ctx, info));

    return out;
}

std::vector<SymbolicPath> postStateUpdate(AnalysisContext& ctx, const SymbolicPath& pre,
                                          const LoopSummary& summary, int loopId) {
    std::vector<SymbolicPath> out;
    for (const LoopExit& exit : summary.exits) {
        SymbolicPath p = pre;

        for (const auto& [v, val] : exit.bindings) {
            const SymAddr* a = p.state.addr.find(v);
            if (!a)
                throw Error(ErrKind::UnboundVariable, "loop binds unknown '" + v + "'");
            p.state.mem.put(*a, val, true);
        }

        std::set<std::string> bumped;
        for (const HavocRange& h : exit.havocs) {
            // drop memory entries possibly inside the range
            std::vector<MemEntry> kept;
            for (MemEntry& e : p.state.mem.entries) {
                bool sameBase = atomEq(e.addr.base, h.base);
                if (!sameBase) {
                    kept.push_back(std::move(e));
                    continue;
                }
                if (h.wholeArray)
                    continue;
                SymExpr below = sub(h.lo, e.addr.offset); // > 0: entry before range
                below.k -= 1;
                SymExpr above = sub(e.addr.offset, h.hi); // >= 0: entry past range
                if (implies(p.pc, BoolAtom{Rel::Ge0, below}) ||
                    implies(p.pc, BoolAtom{Rel::Ge0, above}))
                    kept.push_back(std::move(e));
            }
            p.state.mem.entries = std::move(kept);
            if (!bumped.count(h.array)) {
                bumped.insert(h.array);
                p.state.epoch[h.base] = p.state.epochOf(h.base) + 1;
            }
            FootprintEvent ev;
            ev.kind = FootprintEvent::Kind::Range;
            ev.base = h.base;
            ev.lo = h.lo;
            ev.hi = h.hi;
            ev.wholeArray = h.wholeArray;
            p.footprint.push_back(std::move(ev));
            insertSegment(ctx, p.segs, Segment{SymAddr{h.base, h.lo}, sub(h.hi, h.lo),
                                               ContentSummary::unknown()},
                          p.pc);
        }

        for (const PcElem& c : exit.conds)
            p.pc.conjoin(c);

        for (const FillFact& f : exit.fills) {
            int epoch = p.state.epochOf(f.base);
            // refined segment over the havocked range
            Segment seg{SymAddr{f.base, f.lo}, sub(f.hi, f.lo), ContentSummary::indexed(f.phi)};
            insertSegment(ctx, p.segs, std::move(seg), p.pc);
            // matching quantified fact
            uint32_t k = ctx.freshSym(SymOrigin::BoundIndex, "k", loopId);
            Subst ph;
            ph.syms[ctx.placeholderSym()] = sub(symExpr(k), f.lo);
            QuantConstraint q;
            q.forall = true;
            q.var = k;
            q.lo = f.lo;
            q.hi = f.hi;
            q.body = BoolAtom{Rel::Eq0,
                              sub(atomExpr(makeReadAtom(SymAddr{f.base, symExpr(k)}, epoch)),
                                  substitute(f.phi, ph))};
            p.pc.conjoin(pcQuant(std::move(q)));
        }

        // invariants instantiated at the exit bindings
        Subst cur;
        for (const auto& [v, val] : exit.bindings)
            cur.curVars[v] = val;
        for (const InvariantClause& c : summary.clauses) {
            if (c.kind == InvariantClause::Kind::RangeInvariant) {
                auto it = cur.curVars.find(c.iterVar);
                if (it == cur.curVars.end())
                    continue;
                BoolAtom loA{Rel::Ge0, sub(it->second, c.lo)};
                if (!triviallyTrue(loA))
                    p.pc.conjoin(pcAtom(loA));
                if (c.hi) {
                    BoolAtom hiA{Rel::Ge0, sub(*c.hi, it->second)};
                    if (!triviallyTrue(hiA))
                        p.pc.conjoin(pcAtom(hiA));
                }
            } else if (c.kind == InvariantClause::Kind::Invariant && c.formula) {
                // clauses about array content speak of the cell values at the
                // loop head, which the epoch discipline cannot re-anchor here;
                // the principal's exit facts already carry that information
                bool readsArray = false;
                std::function<void(const SymExpr&)> scan = [&](const SymExpr& e) {
                    for (const auto& [cf, at] : e.terms) {
                        (void)cf;
                        if (std::holds_alternative<ReadAtom>(at->v))
                            readsArray = true;
                        else if (const auto* pr = std::get_if<ProdAtom>(&at->v))
                            for (const auto& f : pr->factors)
                                scan(atomExpr(f));
                    }
                };
                if (const auto* a = std::get_if<BoolAtom>(&c.formula->v)) {
                    scan(a->e);
                } else if (const auto* q = std::get_if<QuantConstraint>(&c.formula->v)) {
                    scan(q->lo);
                    scan(q->hi);
                    scan(q->body.e);
                }
                if (readsArray)
                    continue;
                PcElem inst = substitute(*c.formula, cur);
                if (const auto* a = std::get_if<BoolAtom>(&inst.v)) {
                    if (!triviallyTrue(*a))
                        p.pc.conjoin(inst);
                } else if (const auto* q = std::get_if<QuantConstraint>(&inst.v)) {
                    if (!exprEq(q->lo, q->hi))
                        p.pc.conjoin(inst);
                }
            }
        }

        if (pruneInfeasible(p.pc) == Feas::Infeasible)
            continue;
        segMerge(ctx, p.segs);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace arcs
