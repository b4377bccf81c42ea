// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/executor.hpp"

#include <algorithm>
#include <sstream>

#include "arcs/compare.hpp"

namespace arcs {

namespace {

SymExpr scalarValue(const SymbolicPath& path, const std::string& x) {
    const SymAddr* a = path.state.addr.find(x);
    if (!a)
        throw Error(ErrKind::UnboundVariable, "unbound variable '" + x + "'");
    const MemEntry* e = path.state.mem.findExact(*a);
    if (!e)
        throw Error(ErrKind::UnboundVariable, "no value for '" + x + "'");
    if (!std::holds_alternative<SymExpr>(e->val))
        throw Error(ErrKind::Internal, "'" + x + "' holds an address, read as integer");
    return std::get<SymExpr>(e->val);
}

SymAddr storedAddress(const SymbolicPath& path, const std::string& addrVar) {
    const SymAddr* a = path.state.addr.find(addrVar);
    if (!a)
        throw Error(ErrKind::UnboundVariable, "unbound address variable '" + addrVar + "'");
    const MemEntry* e = path.state.mem.findExact(*a);
    if (!e || !std::holds_alternative<SymAddr>(e->val))
        throw Error(ErrKind::Internal, "address variable '" + addrVar + "' holds no address");
    return std::get<SymAddr>(e->val);
}

// Read of an array cell. Resolution order: exact/provably-equal memory entry,
// then aliasing ambiguity (havoc symbol constrained by segment facts), then
// provably-untouched entry content as an epoch-0 opaque read.
SymExpr readCell(AnalysisContext& ctx, SymbolicPath& path, const SymAddr& cell) {
    for (const auto& e : path.state.mem.entries) {
        if (!atomEq(e.addr.base, cell.base))
            continue;
        if (addrEq(e.addr, cell) ||
            compareExprs(e.addr.offset, cell.offset, path.pc) == Cmp3::MustEqual) {
            if (!std::holds_alternative<SymExpr>(e.val))
                throw Error(ErrKind::Internal, "pointer cell read as integer");
            return std::get<SymExpr>(e.val);
        }
    }

    bool ambiguous = false;
    for (const auto& ev : path.footprint) {
        if (!atomEq(ev.base, cell.base))
            continue;
        if (ev.kind == FootprintEvent::Kind::Point) {
            if (compareExprs(ev.off, cell.offset, path.pc) != Cmp3::MustDiffer) {
                ambiguous = true;
                break;
            }
        } else {
            SymExpr below = sub(ev.lo, cell.offset);
            below.k -= 1; // off < lo
            SymExpr above = sub(cell.offset, ev.hi); // off >= hi
            if (!implies(path.pc, BoolAtom{Rel::Ge0, below}) &&
                !implies(path.pc, BoolAtom{Rel::Ge0, above})) {
                ambiguous = true;
                break;
            }
        }
    }

    if (ambiguous) {
        SegReadResult facts = segRead(ctx, path.segs, cell, path.pc);
        if (facts.definite)
            return facts.facts[0];
        SymExpr h = symExpr(ctx.freshSym(SymOrigin::Havoc, "rd"));
        if (!facts.facts.empty()) {
            if (facts.facts.size() == 1) {
                path.pc.conjoinAtom(BoolAtom{Rel::Eq0, sub(h, facts.facts[0])});
            } else {
                Disjunction d;
                for (const auto& f : facts.facts)
                    d.alts.push_back({pcAtom(BoolAtom{Rel::Eq0, sub(h, f)})});
                path.pc.conjoin(pcDisj(std::move(d)));
            }
        }
        return h;
    }

    SymExpr v = atomExpr(makeReadAtom(cell, 0));
    path.state.mem.put(cell, v, false);
    return v;
}

} // namespace

SymExpr evalIr(AnalysisContext& ctx, SymbolicPath& path, const IrExprPtr& e) {
    switch (e->kind) {
    case IrExpr::Kind::Const: return constExpr(e->value);
    case IrExpr::Kind::IntVar: return scalarValue(path, e->name);
    case IrExpr::Kind::AddrVar:
        throw Error(ErrKind::Internal, "address variable in arithmetic position");
    case IrExpr::Kind::BinOp: {
        SymExpr l = evalIr(ctx, path, e->lhs);
        SymExpr r = evalIr(ctx, path, e->rhs);
        switch (e->op) {
        case BinIntOp::Add: return add(l, r);
        case BinIntOp::Sub: return sub(l, r);
        case BinIntOp::Mul: return mul(l, r);
        }
        return l;
    }
    case IrExpr::Kind::Read: return readCell(ctx, path, storedAddress(path, e->name));
    }
    throw Error(ErrKind::Internal, "unreachable expression kind");
}

std::vector<PcElem> evalIrBool(AnalysisContext& ctx, SymbolicPath& path, const IrBoolPtr& b,
                               bool negated) {
    switch (b->kind) {
    case IrBool::Kind::Cmp: {
        SymExpr l = evalIr(ctx, path, b->lhs);
        SymExpr r = evalIr(ctx, path, b->rhs);
        BoolAtom atom;
        switch (b->cmp) {
        case CmpOp::Le: atom = BoolAtom{Rel::Ge0, sub(r, l)}; break;
        case CmpOp::Lt: atom = BoolAtom{Rel::Ge0, [&] { SymExpr d = sub(r, l); d.k -= 1; return d; }()}; break;
        case CmpOp::Ge: atom = BoolAtom{Rel::Ge0, sub(l, r)}; break;
        case CmpOp::Gt: atom = BoolAtom{Rel::Ge0, [&] { SymExpr d = sub(l, r); d.k -= 1; return d; }()}; break;
        case CmpOp::Eq: atom = BoolAtom{Rel::Eq0, sub(l, r)}; break;
        case CmpOp::Ne: atom = BoolAtom{Rel::Ne0, sub(l, r)}; break;
        }
        if (negated)
            atom = negate(atom);
        return {pcAtom(std::move(atom))};
    }
    case IrBool::Kind::Not: return evalIrBool(ctx, path, b->a, !negated);
    case IrBool::Kind::And: {
        auto l = evalIrBool(ctx, path, b->a, negated);
        auto r = evalIrBool(ctx, path, b->b, negated);
        if (!negated) { // conjunction
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        Disjunction d; // !(a && b) == !a || !b
        d.alts.push_back(std::move(l));
        d.alts.push_back(std::move(r));
        return {pcDisj(std::move(d))};
    }
    case IrBool::Kind::Or: {
        auto l = evalIrBool(ctx, path, b->a, negated);
        auto r = evalIrBool(ctx, path, b->b, negated);
        if (negated) { // !(a || b) == !a && !b
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        Disjunction d;
        d.alts.push_back(std::move(l));
        d.alts.push_back(std::move(r));
        return {pcDisj(std::move(d))};
    }
    }
    throw Error(ErrKind::Internal, "unreachable boolean kind");
}

SymbolicPath initState(AnalysisContext& ctx, const LoweredFunction& lf, const BoolPtr& pre) {
    SymbolicPath p;
    const FunctionDef& fd = *lf.source;

    std::set<std::string> params;
    for (const auto& prm : fd.params)
        params.insert(prm.name);

    for (const auto& x : lf.intVars) {
        AtomPtr base = ctx.freshBase("&" + x);
        SymAddr cell{base, constExpr(0)};
        p.state.addr.m[x] = cell;
        ctx.cellBaseOfVar[x] = base;
        bool isParam = params.count(x) > 0;
        uint32_t s = ctx.freshSym(isParam ? SymOrigin::EntryValue : SymOrigin::Havoc, x);
        if (isParam) {
            ctx.entrySymOfVar[x] = s;
            ctx.scalarParams.insert(x);
        }
        p.state.mem.put(cell, symExpr(s), false);
    }
    for (const auto& ar : lf.arrayVars) {
        AtomPtr ptrCell = ctx.freshBase("&" + ar);
        AtomPtr block = ctx.freshBase(ar);
        SymAddr cell{ptrCell, constExpr(0)};
        p.state.addr.m[ar] = cell;
        p.state.mem.put(cell, SymAddr{block, constExpr(0)}, false);
        ctx.cellBaseOfVar[ar] = ptrCell;
        ctx.blockBaseOfArray[ar] = block;
        ctx.arrayParams.insert(ar);
        ctx.lenSymOfArray[ar] = ctx.freshSym(SymOrigin::EntryValue, "len_" + ar);
    }
    for (const auto& v : assignedVars(fd))
        ctx.assignedInBody.insert(v);

    if (pre) {
        // precondition over parameters, array lengths and entry array contents
        std::function<SymExpr(const ExprPtr&)> evalE = [&](const ExprPtr& e) -> SymExpr {
            switch (e->kind) {
            case AstExpr::Kind::IntConst: return constExpr(e->value);
            case AstExpr::Kind::Var: {
                auto it = ctx.entrySymOfVar.find(e->name);
                if (it != ctx.entrySymOfVar.end())
                    return symExpr(it->second);
                if (e->name.rfind("len_", 0) == 0) {
                    auto la = ctx.lenSymOfArray.find(e->name.substr(4));
                    if (la != ctx.lenSymOfArray.end())
                        return symExpr(la->second);
                }
                throw Error(ErrKind::UnboundVariable,
                            "precondition references unknown '" + e->name + "'");
            }
            case AstExpr::Kind::BinOp: {
                SymExpr l = evalE(e->lhs), r = evalE(e->rhs);
                switch (e->op) {
                case BinIntOp::Add: return add(l, r);
                case BinIntOp::Sub: return sub(l, r);
                case BinIntOp::Mul: return mul(l, r);
                }
                return l;
            }
            case AstExpr::Kind::ArrayAccess: {
                auto it = ctx.blockBaseOfArray.find(e->name);
                if (it == ctx.blockBaseOfArray.end())
                    throw Error(ErrKind::UnboundVariable,
                                "precondition references unknown array '" + e->name + "'");
                return atomExpr(makeReadAtom(SymAddr{it->second, evalE(e->index)}, 0));
            }
            }
            throw Error(ErrKind::Internal, "unreachable");
        };
        std::function<std::vector<PcElem>(const BoolPtr&, bool)> evalB =
            [&](const BoolPtr& b, bool neg) -> std::vector<PcElem> {
            switch (b->kind) {
            case AstBool::Kind::Cmp: {
                SymExpr l = evalE(b->lhs), r = evalE(b->rhs);
                BoolAtom atom;
                switch (b->cmp) {
                case CmpOp::Le: atom = BoolAtom{Rel::Ge0, sub(r, l)}; break;
                case CmpOp::Lt: atom = BoolAtom{Rel::Ge0, [&] { SymExpr d = sub(r, l); d.k -= 1; return d; }()}; break;
                case CmpOp::Ge: atom = BoolAtom{Rel::Ge0, sub(l, r)}; break;
                case CmpOp::Gt: atom = BoolAtom{Rel::Ge0, [&] { SymExpr d = sub(l, r); d.k -= 1; return d; }()}; break;
                case CmpOp::Eq: atom = BoolAtom{Rel::Eq0, sub(l, r)}; break;
                case CmpOp::Ne: atom = BoolAtom{Rel::Ne0, sub(l, r)}; break;
                }
                if (neg)
                    atom = negate(atom);
                return {pcAtom(std::move(atom))};
            }
            case AstBool::Kind::Not: return evalB(b->a, !neg);
            case AstBool::Kind::And: {
                auto l = evalB(b->a, neg), r = evalB(b->b, neg);
                if (!neg) {
                    l.insert(l.end(), r.begin(), r.end());
                    return l;
                }
                Disjunction d;
                d.alts.push_back(std::move(l));
                d.alts.push_back(std::move(r));
                return {pcDisj(std::move(d))};
            }
            case AstBool::Kind::Or: {
                auto l = evalB(b->a, neg), r = evalB(b->b, neg);
                if (neg) {
                    l.insert(l.end(), r.begin(), r.end());
                    return l;
                }
                Disjunction d;
                d.alts.push_back(std::move(l));
                d.alts.push_back(std::move(r));
                return {pcDisj(std::move(d))};
            }
            }
            throw Error(ErrKind::Internal, "unreachable");
        };
        for (auto& el : evalB(pre, false))
            p.pc.conjoin(std::move(el));
    }
    p.pc.preMark = p.pc.elems.size();
    p.loc = lf.entryLabel;
    return p;
}

namespace {

std::vector<PcElem> negateElem(const PcElem& e);

// !(e1 && e2 && ...) as a path-condition element list
std::vector<PcElem> negateElems(const std::vector<PcElem>& elems) {
    if (elems.size() == 1)
        return negateElem(elems[0]);
    Disjunction d;
    for (const auto& e : elems)
        d.alts.push_back(negateElem(e));
    return {pcDisj(std::move(d))};
}

std::vector<PcElem> negateElem(const PcElem& e) {
    switch (e.v.index()) {
    case 0: return {pcAtom(negate(std::get<BoolAtom>(e.v)))};
    case 1: {
        QuantConstraint q = std::get<QuantConstraint>(e.v);
        q.forall = !q.forall;
        q.body = negate(q.body);
        return {pcQuant(std::move(q))};
    }
    default: {
        const auto& d = std::get<Disjunction>(e.v);
        std::vector<PcElem> out; // !(A || B) == !A && !B
        for (const auto& alt : d.alts) {
            auto na = negateElems(alt);
            out.insert(out.end(), na.begin(), na.end());
        }
        return out;
    }
    }
}

struct Executor {
    AnalysisContext& ctx;
    const PluginRegistry& reg;
    std::map<int, std::vector<LoopAnalysisRecord>>& loopRuns;
    std::map<int, SourceLoc>& loopLocs;
    std::vector<SymbolicPath> finished;
    int nextId = 1;

    void checkBudget(size_t active) {
        if (static_cast<int>(active + finished.size()) > ctx.options.pathBudget)
            throw Error(ErrKind::PathExplosion,
                        "path budget exceeded (" + std::to_string(active + finished.size()) +
                            " paths, budget " + std::to_string(ctx.options.pathBudget) + ")");
    }

    std::vector<SymbolicPath> execOne(const IrStmtPtr& s, SymbolicPath path) {
        ctx.checkDeadline();
        path.loc = s->label;
        switch (s->kind) {
        case IrStmt::Kind::Seq: {
            std::vector<SymbolicPath> cur{std::move(path)};
            for (const auto& k : s->seq) {
                std::vector<SymbolicPath> next;
                for (auto& p : cur) {
                    auto step = execOne(k, std::move(p));
                    for (auto& q : step) {
                        if (q.finished)
                            finished.push_back(std::move(q));
                        else
                            next.push_back(std::move(q));
                    }
                }
                checkBudget(next.size());
                cur = std::move(next);
                if (cur.empty())
                    break;
            }
            return cur;
        }
        case IrStmt::Kind::Assign: {
            SymExpr v = evalIr(ctx, path, s->expr);
            const SymAddr* a = path.state.addr.find(s->name);
            if (!a)
                throw Error(ErrKind::UnboundVariable, "assignment to unknown '" + s->name + "'");
            path.state.mem.put(*a, v, true);
            return {std::move(path)};
        }
        case IrStmt::Kind::AddrElem: {
            SymExpr idx = evalIr(ctx, path, s->index);
            auto blk = ctx.blockBaseOfArray.find(s->arrayName);
            if (blk == ctx.blockBaseOfArray.end())
                throw Error(ErrKind::UnboundVariable, "unknown array '" + s->arrayName + "'");
            const SymAddr* cell = path.state.addr.find(s->name);
            if (!cell) {
                AtomPtr base = ctx.freshBase("&" + s->name);
                path.state.addr.m[s->name] = SymAddr{base, constExpr(0)};
                cell = path.state.addr.find(s->name);
            }
            path.state.mem.put(*cell, SymAddr{blk->second, std::move(idx)}, true);
            return {std::move(path)};
        }
        case IrStmt::Kind::Write: {
            SymExpr v = evalIr(ctx, path, s->expr);
            SymAddr target = storedAddress(path, s->name);
            std::vector<MemEntry> kept;
            for (MemEntry& e : path.state.mem.entries) {
                if (!atomEq(e.addr.base, target.base) ||
                    compareExprs(e.addr.offset, target.offset, path.pc) == Cmp3::MustDiffer)
                    kept.push_back(std::move(e));
            }
            path.state.mem.entries = std::move(kept);
            path.state.mem.put(target, v, true);
            FootprintEvent ev;
            ev.kind = FootprintEvent::Kind::Point;
            ev.base = target.base;
            ev.off = target.offset;
            path.footprint.push_back(std::move(ev));
            segWrite(ctx, path.segs, target, path.pc);
            segMerge(ctx, path.segs);
            return {std::move(path)};
        }
        case IrStmt::Kind::If: {
            std::vector<PcElem> conds = evalIrBool(ctx, path, s->cond, false);
            std::vector<PcElem> negConds = negateElems(conds);
            std::vector<SymbolicPath> out;
            SymbolicPath pb = path;
            for (auto& c : conds)
                pb.pc.conjoin(std::move(c));
            if (pruneInfeasible(pb.pc) != Feas::Infeasible) {
                for (auto& q : execOne(s->thenS, std::move(pb)))
                    out.push_back(std::move(q));
            }
            SymbolicPath pn = std::move(path);
            for (auto& c : negConds)
                pn.pc.conjoin(std::move(c));
            if (pruneInfeasible(pn.pc) != Feas::Infeasible) {
                for (auto& q : execOne(s->elseS, std::move(pn)))
                    out.push_back(std::move(q));
            }
            return out;
        }
        case IrStmt::Kind::While: {
            loopLocs[s->loopId] = s->loc;
            LoopSummary summary = analyzeLoop(ctx, *s, path, reg);
            if (summary.fail)
                throw Error(ErrKind::Unsupported, "loop analysis failed: " + summary.failReason,
                            s->loc);
            loopRuns[s->loopId].push_back(LoopAnalysisRecord{path.pc, summary.clauses});
            return postStateUpdate(ctx, path, summary, s->loopId);
        }
        case IrStmt::Kind::Return: {
            if (s->expr)
                path.result = evalIr(ctx, path, s->expr);
            path.finished = true;
            return {std::move(path)};
        }
        case IrStmt::Kind::Break:
            throw Error(ErrKind::Internal, "break outside loop reached the executor");
        }
        throw Error(ErrKind::Internal, "unreachable statement kind");
    }
};

} // namespace

std::vector<SymbolicPath> execStmt(AnalysisContext& ctx, const IrStmtPtr& stmt,
                                   const SymbolicPath& path, const PluginRegistry& reg,
                                   std::map<int, std::vector<LoopAnalysisRecord>>& loopRuns) {
    std::map<int, SourceLoc> locs;
    Executor ex{ctx, reg, loopRuns, locs, {}, 1};
    auto out = ex.execOne(stmt, path);
    for (auto& f : ex.finished)
        out.push_back(std::move(f));
    return out;
}

RunResult run(AnalysisContext& ctx, const Program& prog, const FunctionDef& fd,
              const BoolPtr& preOverride) {
    RunResult result;
    result.lowered = lower(prog, fd);
    result.cfg = buildCfg(result.lowered);

    BoolPtr pre = preOverride ? preOverride : fd.declaredPre;
    SymbolicPath p0 = initState(ctx, result.lowered, pre);

    PluginRegistry reg = PluginRegistry::fromNames(ctx.options.plugins);
    Executor ex{ctx, reg, result.loopRuns, result.loopLocs, {}, 1};
    std::vector<SymbolicPath> tail = ex.execOne(result.lowered.root, std::move(p0));

    for (auto& p : tail) // fell off the end (void path)
        ex.finished.push_back(std::move(p));

    int id = 0;
    for (auto& p : ex.finished) {
        if (pruneInfeasible(p.pc) == Feas::Infeasible)
            continue;
        p.loc = result.lowered.exitLabel;
        p.id = id++;
        result.finals.push_back(std::move(p));
    }
    return result;
}

std::string showPath(const AnalysisContext& ctx, const SymbolicPath& p) {
    (void)ctx;
    std::ostringstream os;
    os << "path " << p.id << " @l" << p.loc << "\n";
    os << "  cond: " << show(p.pc) << "\n";
    if (p.result)
        os << "  result: " << show(*p.result) << "\n";
    std::string segs = show(p.segs);
    if (!segs.empty()) {
        os << "  segments:\n";
        std::istringstream in(segs);
        std::string line;
        while (std::getline(in, line))
            os << "    " << line << "\n";
    }
    if (!p.footprint.empty()) {
        os << "  footprint:\n";
        for (const auto& ev : p.footprint) {
            if (ev.kind == FootprintEvent::Kind::Point)
                os << "    " << show(SymAddr{ev.base, ev.off}) << "\n";
            else
                os << "    " << show(SymAddr{ev.base, ev.lo}) << " .. " << show(ev.hi) << ")\n";
        }
    }
    return os.str();
}

} // namespace arcs
