// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/contracts.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "arcs/compare.hpp"

namespace arcs {

SrcFormula SrcFormula::conj(std::vector<SrcFormula> fs) {
    if (fs.empty())
        return mkTrue();
    if (fs.size() == 1)
        return std::move(fs[0]);
    SrcFormula f;
    f.kind = Kind::And;
    f.kids = std::move(fs);
    return f;
}

namespace {

int cmpSrcAtom(const SrcAtom& a, const SrcAtom& b);

int cmpSrcLin(const SrcLin& a, const SrcLin& b) {
    if (a.k != b.k)
        return a.k < b.k ? -1 : 1;
    if (a.parts.size() != b.parts.size())
        return a.parts.size() < b.parts.size() ? -1 : 1;
    for (size_t i = 0; i < a.parts.size(); ++i) {
        if (a.parts[i].first != b.parts[i].first)
            return a.parts[i].first < b.parts[i].first ? -1 : 1;
        if (int c = cmpSrcAtom(a.parts[i].second, b.parts[i].second))
            return c;
    }
    return 0;
}

int cmpSrcAtom(const SrcAtom& a, const SrcAtom& b) {
    if (a.kind != b.kind)
        return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
    if (a.name != b.name)
        return a.name < b.name ? -1 : 1;
    if (a.args.size() != b.args.size())
        return a.args.size() < b.args.size() ? -1 : 1;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = cmpSrcLin(a.args[i], b.args[i]))
            return c;
    return 0;
}

} // namespace

bool srcLinEq(const SrcLin& a, const SrcLin& b) { return cmpSrcLin(a, b) == 0; }

namespace {

struct ProjectionFailure {};

// Translates symbolic expressions back to source terms. Internal symbols must
// be pre-bound (eliminated or named as quantifier variables) before terms are
// projected; an unknown symbol aborts the current conjunct.
struct Projector {
    explicit Projector(const AnalysisContext& c) : ctx(c) {}

    const AnalysisContext& ctx;
    const SymbolicPath* path = nullptr;      // for opaque-read epoch currency
    std::map<uint32_t, std::string> bound;   // quantifier-bound symbols in scope
    bool* residual = nullptr;
    bool renderCellsPlain = false;           // loop annotations: current content

    void markResidual() {
        if (residual)
            *residual = true;
    }

    bool baseWritten(const AtomPtr& base) const {
        if (!path)
            return false;
        for (const auto& ev : path->footprint)
            if (atomEq(ev.base, base))
                return true;
        return false;
    }

    // An opaque read at epoch e still describes the cell's final content when
    // no later write event may have touched its base.
    bool epochCurrent(const AtomPtr& base, int epoch) const {
        if (!path)
            return true;
        if (epoch != path->state.epochOf(base))
            return false;
        long lastRange = -1;
        for (size_t i = 0; i < path->footprint.size(); ++i)
            if (path->footprint[i].kind == FootprintEvent::Kind::Range &&
                atomEq(path->footprint[i].base, base))
                lastRange = static_cast<long>(i);
        for (size_t i = lastRange < 0 ? 0 : static_cast<size_t>(lastRange) + 1;
             i < path->footprint.size(); ++i)
            if (path->footprint[i].kind == FootprintEvent::Kind::Point &&
                atomEq(path->footprint[i].base, base))
                return false;
        return true;
    }

    SrcAtom projectAtom(const AtomPtr& a) {
        switch (a->v.index()) {
        case 0: { // SymAtom
            uint32_t id = std::get<SymAtom>(a->v).id;
            auto bi = bound.find(id);
            if (bi != bound.end())
                return SrcAtom{SrcAtom::Kind::Bound, bi->second, {}};
            SymInfo si = ctx.info(id);
            if (si.origin == SymOrigin::EntryValue) {
                // array length symbols carry the len_ prefix
                for (const auto& [ar, sid] : ctx.lenSymOfArray)
                    if (sid == id)
                        return SrcAtom{SrcAtom::Kind::Len, ar, {}};
                bool old = ctx.assignedInBody.count(si.name) > 0;
                return SrcAtom{old ? SrcAtom::Kind::OldVar : SrcAtom::Kind::Var, si.name, {}};
            }
            throw ProjectionFailure{};
        }
        case 1: { // ReadAtom
            const auto& r = std::get<ReadAtom>(a->v);
            std::string array = ctx.arrayOfBase(r.addr.base);
            if (array.empty())
                throw ProjectionFailure{};
            SrcAtom cell;
            cell.name = array;
            cell.args.push_back(projectExpr(r.addr.offset));
            if (renderCellsPlain) {
                cell.kind = SrcAtom::Kind::Cell;
                return cell;
            }
            if (r.epoch == 0) {
                cell.kind = baseWritten(r.addr.base) ? SrcAtom::Kind::OldCell : SrcAtom::Kind::Cell;
                return cell;
            }
            if (!epochCurrent(r.addr.base, r.epoch))
                throw ProjectionFailure{};
            cell.kind = SrcAtom::Kind::Cell;
            return cell;
        }
        case 2: throw ProjectionFailure{}; // aggregates have no source form here
        case 3: {
            const auto& p = std::get<ProdAtom>(a->v);
            SrcAtom prod;
            prod.kind = SrcAtom::Kind::Prod;
            for (const auto& f : p.factors) {
                SrcLin one;
                one.parts.emplace_back(1, projectAtom(f));
                prod.args.push_back(std::move(one));
            }
            return prod;
        }
        case 4: throw ProjectionFailure{}; // raw base constant
        default: {
            const auto& c = std::get<CurAtom>(a->v);
            if (c.name == "\\result")
                return SrcAtom{SrcAtom::Kind::Result, "", {}};
            return SrcAtom{SrcAtom::Kind::Var, c.name, {}};
        }
        }
    }

    SrcLin projectExpr(const SymExpr& e) {
        SrcLin out;
        out.k = e.k;
        for (const auto& [coeff, atom] : e.terms)
            out.parts.emplace_back(coeff, projectAtom(atom));
        return out;
    }

    // Pretty comparison: split into positive and negative sides.
    SrcFormula projectAtomFormula(const BoolAtom& a) {
        SrcLin pos, negs;
        for (const auto& [coeff, atom] : a.e.terms) {
            if (coeff > 0)
                pos.parts.emplace_back(coeff, projectAtom(atom));
            else
                negs.parts.emplace_back(-coeff, projectAtom(atom));
        }
        long long c = a.e.k;
        SrcFormula f;
        f.kind = SrcFormula::Kind::Cmp;
        switch (a.rel) {
        case Rel::Ge0:
            if (c == -1) {
                f.rel = CmpOp::Lt; // negs < pos
                f.lhs = std::move(negs);
                f.rhs = std::move(pos);
            } else if (c < -1) {
                f.rel = CmpOp::Le;
                negs.k = -c;
                f.lhs = std::move(negs);
                f.rhs = std::move(pos);
            } else {
                f.rel = CmpOp::Le;
                pos.k = c;
                f.lhs = std::move(negs);
                f.rhs = std::move(pos);
            }
            return f;
        case Rel::Eq0:
        case Rel::Ne0: {
            f.rel = a.rel == Rel::Eq0 ? CmpOp::Eq : CmpOp::Ne;
            if (c <= 0)
                negs.k = -c;
            else
                pos.k = c;
            // prefer \result or a lone positive term on the left
            bool swap = pos.parts.empty() && !negs.parts.empty();
            for (const auto& [cf, at] : negs.parts)
                if (at.kind == SrcAtom::Kind::Result && pos.parts.size() != 1)
                    swap = true;
            if (swap) {
                f.lhs = std::move(negs);
                f.rhs = std::move(pos);
            } else {
                f.lhs = std::move(pos);
                f.rhs = std::move(negs);
            }
            return f;
        }
        }
        return f;
    }

    SrcFormula projectElem(const PcElem& e) {
        switch (e.v.index()) {
        case 0: return projectAtomFormula(std::get<BoolAtom>(e.v));
        case 1: {
            const auto& q = std::get<QuantConstraint>(e.v);
            SrcFormula f;
            f.kind = q.forall ? SrcFormula::Kind::Forall : SrcFormula::Kind::Exists;
            auto have = bound.find(q.var);
            bool preBound = have != bound.end();
            std::string name = preBound ? have->second : freshBoundName(ctx.info(q.var).name);
            f.boundVar = name;
            f.lo = projectExpr(q.lo);
            f.hi = projectExpr(q.hi);
            bound[q.var] = name;
            f.kids.push_back(projectAtomFormula(q.body));
            if (!preBound)
                bound.erase(q.var);
            return f;
        }
        default: {
            const auto& d = std::get<Disjunction>(e.v);
            SrcFormula f;
            f.kind = SrcFormula::Kind::Or;
            for (const auto& alt : d.alts) {
                std::vector<SrcFormula> parts;
                for (const auto& el : alt)
                    parts.push_back(projectElem(el));
                f.kids.push_back(SrcFormula::conj(std::move(parts)));
            }
            return f;
        }
        }
    }

    std::set<std::string> usedNames;
    std::string freshBoundName(const std::string& hint) {
        std::string base = hint.empty() ? "k" : hint;
        std::string name = base;
        int n = 2;
        while (usedNames.count(name) || ctx.entrySymOfVar.count(name) ||
               ctx.arrayParams.count(name))
            name = base + std::to_string(n++);
        usedNames.insert(name);
        return name;
    }
};

bool isInternalSym(const AnalysisContext& ctx, uint32_t id) {
    SymOrigin o = ctx.info(id).origin;
    return o != SymOrigin::EntryValue;
}

void collectInternal(const AnalysisContext& ctx, const SymExpr& e, std::set<uint32_t>& out,
                     const std::set<uint32_t>& boundVars) {
    std::set<uint32_t> syms;
    collectSyms(e, syms);
    for (uint32_t id : syms)
        if (!boundVars.count(id) && isInternalSym(ctx, id))
            out.insert(id);
}

void collectInternalElem(const AnalysisContext& ctx, const PcElem& e, std::set<uint32_t>& out,
                         std::set<uint32_t> boundVars) {
    switch (e.v.index()) {
    case 0: collectInternal(ctx, std::get<BoolAtom>(e.v).e, out, boundVars); return;
    case 1: {
        const auto& q = std::get<QuantConstraint>(e.v);
        collectInternal(ctx, q.lo, out, boundVars);
        collectInternal(ctx, q.hi, out, boundVars);
        boundVars.insert(q.var);
        collectInternal(ctx, q.body.e, out, boundVars);
        return;
    }
    default:
        for (const auto& alt : std::get<Disjunction>(e.v).alts)
            for (const auto& el : alt)
                collectInternalElem(ctx, el, out, boundVars);
        return;
    }
}

// solve a top-level equality for one internal symbol, when divisible
std::optional<std::pair<uint32_t, SymExpr>> solveEquality(const AnalysisContext& ctx,
                                                          const SymExpr& e) {
    for (const auto& [coeff, atom] : e.terms) {
        const auto* sa = std::get_if<SymAtom>(&atom->v);
        if (!sa || !isInternalSym(ctx, sa->id))
            continue;
        long long c = coeff;
        SymExpr rest = e;
        for (size_t i = 0; i < rest.terms.size(); ++i) {
            if (const auto* s2 = std::get_if<SymAtom>(&rest.terms[i].second->v);
                s2 && s2->id == sa->id) {
                rest.terms.erase(rest.terms.begin() + static_cast<long>(i));
                break;
            }
        }
        if (mentionsSym(rest, sa->id))
            continue; // appears nonlinearly elsewhere
        bool divisible = rest.k % c == 0;
        for (const auto& [cf, at] : rest.terms)
            divisible = divisible && cf % c == 0;
        if (!divisible)
            continue;
        // c*s + rest == 0  =>  s = -rest/c
        SymExpr val = constExpr(-(rest.k / c));
        for (const auto& [cf, at] : rest.terms)
            val = add(val, SymExpr{0, {{-(cf / c), at}}});
        return std::make_pair(sa->id, std::move(val));
    }
    return std::nullopt;
}

} // namespace

SrcFormula projectPath(const AnalysisContext& ctx, const SymbolicPath& path, bool* residual) {
    // working copies
    std::vector<PcElem> conjuncts(path.pc.elems.begin() + static_cast<long>(path.pc.preMark),
                                  path.pc.elems.end());
    std::optional<SymExpr> result = path.result;

    // final contents of written array cells become postcondition equalities
    std::vector<std::pair<SymAddr, SymExpr>> writes;
    for (const auto& e : path.state.mem.entries) {
        if (!e.fromWrite || !std::holds_alternative<SymExpr>(e.val))
            continue;
        if (ctx.arrayOfBase(e.addr.base).empty())
            continue; // scalar or pointer cell
        writes.emplace_back(e.addr, std::get<SymExpr>(e.val));
    }
    std::sort(writes.begin(), writes.end(), [](const auto& a, const auto& b) {
        if (int c = cmpAtom(a.first.base, b.first.base))
            return c < 0;
        return cmpExpr(a.first.offset, b.first.offset) < 0;
    });

    // eliminate internal symbols defined by equalities (including \result)
    auto substituteAll = [&](uint32_t id, const SymExpr& val) {
        Subst s;
        s.syms[id] = val;
        for (auto& el : conjuncts)
            el = substitute(el, s);
        for (auto& [addr, v] : writes) {
            addr = substitute(addr, s);
            v = substitute(v, s);
        }
        if (result)
            result = substitute(*result, s);
    };

    if (result) {
        // bind s := \result when the result is a single internal symbol
        if (result->k == 0 && result->terms.size() == 1 && result->terms[0].first == 1) {
            if (const auto* sa = std::get_if<SymAtom>(&result->terms[0].second->v);
                sa && isInternalSym(ctx, sa->id)) {
                substituteAll(sa->id, atomExpr(makeCurAtom("\\result")));
            }
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i < conjuncts.size(); ++i) {
            const auto* a = std::get_if<BoolAtom>(&conjuncts[i].v);
            if (!a || a->rel != Rel::Eq0)
                continue;
            auto solved = solveEquality(ctx, a->e);
            if (!solved)
                continue;
            std::vector<PcElem> rest;
            for (size_t j = 0; j < conjuncts.size(); ++j)
                if (j != i)
                    rest.push_back(conjuncts[j]);
            conjuncts = std::move(rest);
            substituteAll(solved->first, solved->second);
            changed = true;
            break;
        }
    }

    // remaining internal symbols become existentially quantified
    std::set<uint32_t> internals;
    for (const auto& el : conjuncts)
        collectInternalElem(ctx, el, internals, {});
    if (result)
        collectInternal(ctx, *result, internals, {});
    for (const auto& [addr, v] : writes) {
        collectInternal(ctx, addr.offset, internals, {});
        collectInternal(ctx, v, internals, {});
    }

    Projector proj(ctx);
    proj.path = &path;
    proj.residual = residual;
    std::vector<uint32_t> exVars(internals.begin(), internals.end());
    std::vector<std::string> exNames;
    for (uint32_t id : exVars) {
        std::string n = proj.freshBoundName("s");
        proj.bound[id] = n;
        exNames.push_back(n);
    }

    // atoms already implied by the precondition add noise, not meaning
    PathCond prePc;
    prePc.elems.assign(path.pc.elems.begin(),
                       path.pc.elems.begin() + static_cast<long>(path.pc.preMark));

    std::vector<SrcFormula> parts;
    for (const auto& el : conjuncts) {
        if (const auto* a = std::get_if<BoolAtom>(&el.v)) {
            std::set<uint32_t> ints;
            collectInternal(ctx, a->e, ints, {});
            if (ints.empty() && implies(prePc, *a))
                continue;
        }
        try {
            parts.push_back(proj.projectElem(el));
        } catch (const ProjectionFailure&) {
            proj.markResidual();
        }
    }
    for (const auto& [addr, v] : writes) {
        try {
            SrcAtom cell;
            cell.kind = SrcAtom::Kind::Cell;
            cell.name = ctx.arrayOfBase(addr.base);
            cell.args.push_back(proj.projectExpr(addr.offset));
            SrcFormula f;
            f.kind = SrcFormula::Kind::Cmp;
            f.rel = CmpOp::Eq;
            f.lhs.parts.emplace_back(1, std::move(cell));
            f.rhs = proj.projectExpr(v);
            parts.push_back(std::move(f));
        } catch (const ProjectionFailure&) {
            proj.markResidual();
        }
    }
    if (result) {
        try {
            SrcFormula f;
            f.kind = SrcFormula::Kind::Cmp;
            f.rel = CmpOp::Eq;
            f.lhs.parts.emplace_back(1, SrcAtom{SrcAtom::Kind::Result, "", {}});
            f.rhs = proj.projectExpr(*result);
            // avoid the degenerate `\result == \result`
            bool selfEq = f.rhs.k == 0 && f.rhs.parts.size() == 1 &&
                          f.rhs.parts[0].first == 1 &&
                          f.rhs.parts[0].second.kind == SrcAtom::Kind::Result;
            if (!selfEq)
                parts.push_back(std::move(f));
        } catch (const ProjectionFailure&) {
            proj.markResidual();
        }
    }

    SrcFormula body = SrcFormula::conj(std::move(parts));
    for (size_t i = exVars.size(); i-- > 0;) {
        SrcFormula ex;
        ex.kind = SrcFormula::Kind::Exists;
        ex.boundVar = exNames[i];
        ex.kids.push_back(std::move(body));
        body = std::move(ex);
    }
    return body;
}

std::vector<AssignsRange> deriveAssigns(const AnalysisContext& ctx, const Configuration& finals,
                                        bool* residual) {
    struct SymRange {
        AtomPtr base;
        SymExpr lo, hi;
    };
    std::vector<AssignsRange> out;
    auto pushUnique = [&](AssignsRange r) {
        for (const auto& have : out)
            if (have.array == r.array && srcLinEq(have.start, r.start) &&
                srcLinEq(have.endExcl, r.endExcl))
                return;
        out.push_back(std::move(r));
    };

    for (const SymbolicPath& p : finals) {
        std::vector<SymRange> ranges;
        for (const auto& ev : p.footprint) {
            if (ctx.arrayOfBase(ev.base).empty())
                continue;
            if (ev.kind == FootprintEvent::Kind::Point)
                ranges.push_back(SymRange{ev.base, ev.off, add(ev.off, constExpr(1))});
            else
                ranges.push_back(SymRange{ev.base, ev.lo, ev.hi});
        }
        // structural adjacency merge within the path
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < ranges.size() && !changed; ++i) {
                for (size_t j = 0; j < ranges.size() && !changed; ++j) {
                    if (i == j || !atomEq(ranges[i].base, ranges[j].base))
                        continue;
                    if (exprEq(ranges[i].hi, ranges[j].lo)) {
                        ranges[i].hi = ranges[j].hi;
                        ranges.erase(ranges.begin() + static_cast<long>(j));
                        changed = true;
                    } else if (exprEq(ranges[i].lo, ranges[j].lo) && exprEq(ranges[i].hi, ranges[j].hi)) {
                        ranges.erase(ranges.begin() + static_cast<long>(j));
                        changed = true;
                    }
                }
            }
        }

        Projector proj(ctx);
        proj.path = &p;
        auto isInternalAtom = [&](const AtomPtr& a) {
            if (const auto* sa = std::get_if<SymAtom>(&a->v))
                return isInternalSym(ctx, sa->id);
            return true; // reads/products/aggregates have no place in a range bound
        };
        for (const auto& r : ranges) {
            if (auto len = sub(r.hi, r.lo).asConst(); len && *len <= 0)
                continue;
            std::string array = ctx.arrayOfBase(r.base);
            auto loR = rewriteWithoutInternal(p.pc, r.lo, isInternalAtom);
            auto hiR = rewriteWithoutInternal(p.pc, r.hi, isInternalAtom);
            if (loR && hiR) {
                if (auto len = sub(*hiR, *loR).asConst(); len && *len <= 0)
                    continue;
                try {
                    AssignsRange ar;
                    ar.array = array;
                    ar.start = proj.projectExpr(*loR);
                    ar.endExcl = proj.projectExpr(*hiR);
                    pushUnique(std::move(ar));
                    continue;
                } catch (const ProjectionFailure&) {
                }
            }
            // widen to the whole array
            if (residual)
                *residual = true;
            AssignsRange ar;
            ar.array = array;
            ar.start.k = 0;
            ar.endExcl.parts.emplace_back(1, SrcAtom{SrcAtom::Kind::Len, array, {}});
            pushUnique(std::move(ar));
        }
    }
    return out;
}

namespace {

SrcLin preExprToLin(const ExprPtr& e);

SrcAtom preAtom(const ExprPtr& e) {
    if (e->kind == AstExpr::Kind::Var) {
        if (e->name.rfind("len_", 0) == 0)
            return SrcAtom{SrcAtom::Kind::Len, e->name.substr(4), {}};
        return SrcAtom{SrcAtom::Kind::Var, e->name, {}};
    }
    SrcAtom cell;
    cell.kind = SrcAtom::Kind::Cell;
    cell.name = e->name;
    cell.args.push_back(preExprToLin(e->index));
    return cell;
}

SrcLin mulLin(const SrcLin& a, const SrcLin& b) {
    // products in preconditions are rare; fold constants, otherwise one
    // side must be constant or both collapse into a Prod atom
    if (a.parts.empty()) {
        SrcLin out = b;
        out.k *= a.k;
        for (auto& [c, at] : out.parts)
            c *= a.k;
        return out;
    }
    if (b.parts.empty()) {
        SrcLin out = a;
        out.k *= b.k;
        for (auto& [c, at] : out.parts)
            c *= b.k;
        return out;
    }
    SrcAtom prod;
    prod.kind = SrcAtom::Kind::Prod;
    prod.args.push_back(a);
    prod.args.push_back(b);
    SrcLin out;
    out.parts.emplace_back(1, std::move(prod));
    return out;
}

SrcLin preExprToLin(const ExprPtr& e) {
    switch (e->kind) {
    case AstExpr::Kind::IntConst: {
        SrcLin l;
        l.k = e->value;
        return l;
    }
    case AstExpr::Kind::Var:
    case AstExpr::Kind::ArrayAccess: {
        SrcLin l;
        l.parts.emplace_back(1, preAtom(e));
        return l;
    }
    case AstExpr::Kind::BinOp: {
        SrcLin l = preExprToLin(e->lhs);
        SrcLin r = preExprToLin(e->rhs);
        if (e->op == BinIntOp::Mul)
            return mulLin(l, r);
        long long sign = e->op == BinIntOp::Add ? 1 : -1;
        l.k += sign * r.k;
        for (auto& [c, at] : r.parts)
            l.parts.emplace_back(sign * c, std::move(at));
        return l;
    }
    }
    return {};
}

} // namespace

SrcFormula preToFormula(const BoolPtr& pre) {
    if (!pre)
        return SrcFormula::mkTrue();
    switch (pre->kind) {
    case AstBool::Kind::Cmp: {
        SrcFormula f;
        f.kind = SrcFormula::Kind::Cmp;
        f.rel = pre->cmp;
        f.lhs = preExprToLin(pre->lhs);
        f.rhs = preExprToLin(pre->rhs);
        return f;
    }
    case AstBool::Kind::Not: {
        const BoolPtr& inner = pre->a;
        switch (inner->kind) {
        case AstBool::Kind::Cmp: {
            SrcFormula f = preToFormula(inner);
            switch (f.rel) {
            case CmpOp::Le: f.rel = CmpOp::Gt; break;
            case CmpOp::Lt: f.rel = CmpOp::Ge; break;
            case CmpOp::Ge: f.rel = CmpOp::Lt; break;
            case CmpOp::Gt: f.rel = CmpOp::Le; break;
            case CmpOp::Eq: f.rel = CmpOp::Ne; break;
            case CmpOp::Ne: f.rel = CmpOp::Eq; break;
            }
            return f;
        }
        case AstBool::Kind::Not: return preToFormula(inner->a);
        case AstBool::Kind::And:
        case AstBool::Kind::Or: { // de Morgan
            SrcFormula f;
            f.kind = inner->kind == AstBool::Kind::And ? SrcFormula::Kind::Or
                                                       : SrcFormula::Kind::And;
            f.kids.push_back(preToFormula(mkNot(inner->a)));
            f.kids.push_back(preToFormula(mkNot(inner->b)));
            return f;
        }
        }
        return SrcFormula::mkTrue();
    }
    case AstBool::Kind::And:
    case AstBool::Kind::Or: {
        SrcFormula f;
        f.kind = pre->kind == AstBool::Kind::And ? SrcFormula::Kind::And : SrcFormula::Kind::Or;
        f.kids.push_back(preToFormula(pre->a));
        f.kids.push_back(preToFormula(pre->b));
        return f;
    }
    }
    return SrcFormula::mkTrue();
}

namespace {

// stable key for clause intersection across loop analyses
std::string formulaKey(const SrcFormula& f);

std::string linKey(const SrcLin& l) {
    std::ostringstream os;
    os << l.k;
    for (const auto& [c, a] : l.parts) {
        os << "|" << c << "*" << static_cast<int>(a.kind) << ":" << a.name;
        for (const auto& arg : a.args)
            os << "(" << linKey(arg) << ")";
    }
    return os.str();
}

std::string formulaKey(const SrcFormula& f) {
    std::ostringstream os;
    os << static_cast<int>(f.kind) << "/" << static_cast<int>(f.rel) << "/" << linKey(f.lhs)
       << "~" << linKey(f.rhs) << "~" << linKey(f.chainMid) << "@" << f.boundVar;
    if (f.lo)
        os << "lo" << linKey(*f.lo);
    if (f.hi)
        os << "hi" << linKey(*f.hi);
    for (const auto& k : f.kids)
        os << "[" << formulaKey(k) << "]";
    return os.str();
}

struct ProjectedClause {
    std::string key;
    LoopAnnotationItem item;
};

// Projects one clause against the path condition its analysis saw. Returns
// nothing when the clause has no source-level form even after weakening.
std::optional<ProjectedClause> projectClause(const AnalysisContext& ctx,
                                             const InvariantClause& c, const PathCond& prePc) {
    Projector proj(ctx);
    proj.renderCellsPlain = true;
    auto isInternalAtom = [&](const AtomPtr& a) {
        if (const auto* sa = std::get_if<SymAtom>(&a->v))
            return isInternalSym(ctx, sa->id);
        return !std::holds_alternative<CurAtom>(a->v);
    };
    auto rewrite = [&](const SymExpr& e) -> std::optional<SymExpr> {
        std::set<uint32_t> internals;
        collectInternal(ctx, e, internals, {});
        if (internals.empty())
            return e;
        return rewriteWithoutInternal(prePc, e, isInternalAtom);
    };

    LoopAnnotationItem item;
    item.kind = c.kind;
    item.plugin = c.plugin;
    try {
        switch (c.kind) {
        case InvariantClause::Kind::RangeInvariant: {
            auto lo = rewrite(c.lo);
            if (!lo) {
                if (auto lb = lowerBound(prePc, c.lo))
                    lo = constExpr(*lb);
                else
                    return std::nullopt;
            }
            SrcFormula f;
            f.kind = SrcFormula::Kind::Chain;
            f.lhs = proj.projectExpr(*lo);
            f.chainMid.parts.emplace_back(1, SrcAtom{SrcAtom::Kind::Var, c.iterVar, {}});
            if (c.hi) {
                auto hi = rewrite(*c.hi);
                if (!hi) {
                    if (auto ub = upperBound(prePc, *c.hi))
                        hi = constExpr(*ub);
                    else
                        return std::nullopt;
                }
                f.rhs = proj.projectExpr(*hi);
            } else {
                f.kind = SrcFormula::Kind::Cmp;
                f.rel = CmpOp::Le;
                f.rhs = f.chainMid;
                f.chainMid = SrcLin{};
            }
            item.formula = std::move(f);
            break;
        }
        case InvariantClause::Kind::Invariant: {
            if (!c.formula)
                return std::nullopt;
            // every free internal symbol must be rewritable over entry terms
            PcElem el = *c.formula;
            std::set<uint32_t> internals;
            collectInternalElem(ctx, el, internals, {});
            // bound variables inside quantifiers are fine; collectInternalElem
            // already skips them
            for (uint32_t id : internals) {
                SymOrigin o = ctx.info(id).origin;
                if (o == SymOrigin::BoundIndex)
                    continue;
                auto rw = rewriteWithoutInternal(prePc, symExpr(id), isInternalAtom);
                if (!rw)
                    return std::nullopt;
                Subst s;
                s.syms[id] = *rw;
                el = substitute(el, s);
            }
            // quantifier bound variables keep their hint names
            if (const auto* q = std::get_if<QuantConstraint>(&el.v))
                proj.bound[q->var] = proj.freshBoundName(ctx.info(q->var).name);
            item.formula = proj.projectElem(el);
            break;
        }
        case InvariantClause::Kind::LoopAssigns: {
            item.scalars = c.scalars;
            for (const auto& r : c.ranges) {
                AssignsRange ar;
                ar.array = r.array;
                auto lo = rewrite(r.lo);
                auto hi = rewrite(r.hiIncl);
                if (!lo || !hi) {
                    ar.start.k = 0;
                    ar.endExcl.parts.emplace_back(1, SrcAtom{SrcAtom::Kind::Len, r.array, {}});
                } else {
                    ar.start = proj.projectExpr(*lo);
                    ar.endExcl = proj.projectExpr(add(*hi, constExpr(1)));
                }
                item.ranges.push_back(std::move(ar));
            }
            break;
        }
        }
    } catch (const ProjectionFailure&) {
        return std::nullopt;
    }

    ProjectedClause pc;
    pc.item = std::move(item);
    std::ostringstream key;
    key << static_cast<int>(pc.item.kind) << "#" << pc.item.plugin << "#"
        << formulaKey(pc.item.formula);
    for (const auto& s : pc.item.scalars)
        key << "," << s;
    for (const auto& r : pc.item.ranges)
        key << ";" << r.array << linKey(r.start) << linKey(r.endExcl);
    pc.key = key.str();
    return pc;
}

} // namespace

Contract synthesize(const AnalysisContext& ctx, const RunResult& rr, const FunctionDef& fd,
                    const BoolPtr& effectivePre) {
    if (rr.finals.empty())
        throw Error(ErrKind::EmptyConfiguration,
                    "no feasible path reaches the exit (contradictory precondition?)");
    Contract c;
    c.function = fd.name;
    c.pre = preToFormula(effectivePre);

    bool residual = false;
    for (const auto& p : rr.finals)
        c.postDisjuncts.push_back(projectPath(ctx, p, &residual));
    c.assigns = deriveAssigns(ctx, rr.finals, &residual);

    // loops of this function body only; loops inlined from callees reference
    // renamed variables and are annotated when their own function is analyzed
    std::set<int> ownLines;
    {
        std::vector<StmtPtr> work{fd.body};
        while (!work.empty()) {
            StmtPtr s = work.back();
            work.pop_back();
            if (!s)
                continue;
            if (s->kind == AstStmt::Kind::While)
                ownLines.insert(s->loc.line);
            if (s->thenS) work.push_back(s->thenS);
            if (s->elseS) work.push_back(s->elseS);
            if (s->body) work.push_back(s->body);
            for (const auto& k : s->seq)
                work.push_back(k);
        }
    }

    for (const auto& [loopId, runs] : rr.loopRuns) {
        LoopAnnotation ann;
        ann.loopId = loopId;
        auto locIt = rr.loopLocs.find(loopId);
        if (locIt != rr.loopLocs.end())
            ann.loc = locIt->second;
        if (!ownLines.count(ann.loc.line))
            continue;

        // project per analysis, then combine: plain invariants must agree on
        // every path into the loop, range invariants take the weakest bounds,
        // assigns ranges widen to the whole array on disagreement
        std::map<std::string, std::pair<LoopAnnotationItem, size_t>> counts;
        std::vector<std::string> order;
        std::vector<std::optional<LoopAnnotationItem>> rangeInvs;   // per run
        std::vector<std::optional<LoopAnnotationItem>> assignsRuns; // per run
        for (const auto& runRec : runs) {
            std::set<std::string> seenHere;
            rangeInvs.emplace_back();
            assignsRuns.emplace_back();
            for (const auto& clause : runRec.clauses) {
                auto projected = projectClause(ctx, clause, runRec.prePc);
                if (!projected) {
                    c.projectionResiduals = true;
                    continue;
                }
                if (projected->item.kind == InvariantClause::Kind::RangeInvariant) {
                    rangeInvs.back() = projected->item;
                    continue;
                }
                if (projected->item.kind == InvariantClause::Kind::LoopAssigns) {
                    assignsRuns.back() = projected->item;
                    continue;
                }
                if (!seenHere.insert(projected->key).second)
                    continue;
                auto it = counts.find(projected->key);
                if (it == counts.end()) {
                    counts.emplace(projected->key, std::make_pair(projected->item, size_t{1}));
                    order.push_back(projected->key);
                } else {
                    it->second.second++;
                }
            }
        }
        for (const auto& key : order) {
            const auto& [item, n] = counts.at(key);
            if (n == runs.size())
                ann.items.push_back(item);
            else
                c.projectionResiduals = true;
        }
        // range invariant: weakest bounds across runs
        {
            bool all = !rangeInvs.empty();
            for (const auto& r : rangeInvs)
                all = all && r.has_value();
            if (all) {
                LoopAnnotationItem merged = *rangeInvs[0];
                bool ok = true, weakened = false;
                for (size_t i = 1; i < rangeInvs.size() && ok; ++i) {
                    const SrcFormula& f = rangeInvs[i]->formula;
                    const SrcFormula& m = merged.formula;
                    if (f.kind != m.kind || !srcLinEq(f.chainMid, m.chainMid)) {
                        ok = false;
                        break;
                    }
                    if (!srcLinEq(f.lhs, m.lhs)) {
                        if (f.lhs.parts.empty() && m.lhs.parts.empty()) {
                            merged.formula.lhs.k = std::min(f.lhs.k, m.lhs.k);
                            weakened = true;
                        } else {
                            ok = false;
                        }
                    }
                    if (ok && f.kind == SrcFormula::Kind::Chain && !srcLinEq(f.rhs, m.rhs)) {
                        if (f.rhs.parts.empty() && m.rhs.parts.empty()) {
                            merged.formula.rhs.k = std::max(f.rhs.k, m.rhs.k);
                            weakened = true;
                        } else {
                            ok = false;
                        }
                    }
                }
                if (ok)
                    ann.items.push_back(merged);
                if (!ok || weakened)
                    c.projectionResiduals = true;
            } else if (!rangeInvs.empty()) {
                c.projectionResiduals = true;
            }
        }
        // loop assigns: union of scalars, ranges widen on disagreement
        {
            bool all = !assignsRuns.empty();
            for (const auto& r : assignsRuns)
                all = all && r.has_value();
            if (all) {
                LoopAnnotationItem merged = *assignsRuns[0];
                for (size_t i = 1; i < assignsRuns.size(); ++i) {
                    for (const auto& s : assignsRuns[i]->scalars)
                        if (std::find(merged.scalars.begin(), merged.scalars.end(), s) ==
                            merged.scalars.end())
                            merged.scalars.push_back(s);
                    // compare range sets structurally per array
                    std::set<std::string> arrays;
                    for (const auto& r : merged.ranges)
                        arrays.insert(r.array);
                    for (const auto& r : assignsRuns[i]->ranges)
                        arrays.insert(r.array);
                    for (const auto& arName : arrays) {
                        auto rangesOf = [&](const LoopAnnotationItem& it) {
                            std::vector<std::string> keys;
                            for (const auto& r : it.ranges)
                                if (r.array == arName)
                                    keys.push_back(linKey(r.start) + "/" + linKey(r.endExcl));
                            std::sort(keys.begin(), keys.end());
                            return keys;
                        };
                        if (rangesOf(merged) != rangesOf(*assignsRuns[i])) {
                            // widen
                            std::vector<AssignsRange> kept;
                            for (const auto& r : merged.ranges)
                                if (r.array != arName)
                                    kept.push_back(r);
                            AssignsRange wide;
                            wide.array = arName;
                            wide.start.k = 0;
                            wide.endExcl.parts.emplace_back(
                                1, SrcAtom{SrcAtom::Kind::Len, arName, {}});
                            kept.push_back(std::move(wide));
                            merged.ranges = std::move(kept);
                            c.projectionResiduals = true;
                        }
                    }
                }
                std::sort(merged.scalars.begin(), merged.scalars.end());
                ann.items.push_back(merged);
            }
        }
        auto rank = [](const LoopAnnotationItem& it) {
            switch (it.kind) {
            case InvariantClause::Kind::RangeInvariant: return 0;
            case InvariantClause::Kind::Invariant: return 1;
            case InvariantClause::Kind::LoopAssigns: return 2;
            }
            return 3;
        };
        std::stable_sort(ann.items.begin(), ann.items.end(),
                         [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
        if (!ann.items.empty())
            c.loops.push_back(std::move(ann));
    }
    if (residual) {
        c.projectionResiduals = true;
        c.notes.push_back("some facts had no source-level form and were dropped or widened");
    }
    return c;
}

} // namespace arcs
