// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/loopinfo.hpp"

#include <algorithm>
#include <climits>

namespace arcs {

namespace {

constexpr size_t kMaxBodyPaths = 16;

// Scalar value in the pre-loop state: A(x) is a fixed (base,0) cell that is
// always strongly updated, so an exact lookup suffices.
SymExpr preScalar(const SymbolicPath& pre, const std::string& x) {
    const SymAddr* a = pre.state.addr.find(x);
    if (!a)
        throw Error(ErrKind::UnboundVariable, "unbound variable '" + x + "'");
    const MemEntry* e = pre.state.mem.findExact(*a);
    if (!e || !std::holds_alternative<SymExpr>(e->val))
        throw Error(ErrKind::UnboundVariable, "no scalar value for '" + x + "'");
    return std::get<SymExpr>(e->val);
}

AtomPtr arrayBlockOf(const AnalysisContext& ctx, const std::string& ar) {
    auto it = ctx.blockBaseOfArray.find(ar);
    if (it == ctx.blockBaseOfArray.end())
        throw Error(ErrKind::UnboundVariable, "unknown array '" + ar + "'");
    return it->second;
}

void syntacticWrites(const IrStmtPtr& s, std::set<std::string>& scalars,
                     std::set<std::string>& arrays, bool& hasReturn, bool& hasBreak,
                     std::map<std::string, std::string>& addrArrays) {
    if (!s)
        return;
    switch (s->kind) {
    case IrStmt::Kind::Assign: scalars.insert(s->name); break;
    case IrStmt::Kind::AddrElem: addrArrays[s->name] = s->arrayName; break;
    case IrStmt::Kind::Write: arrays.insert(addrArrays.at(s->name)); break;
    case IrStmt::Kind::Return: hasReturn = true; break;
    case IrStmt::Kind::Break: hasBreak = true; break;
    default: break;
    }
    syntacticWrites(s->thenS, scalars, arrays, hasReturn, hasBreak, addrArrays);
    syntacticWrites(s->elseS, scalars, arrays, hasReturn, hasBreak, addrArrays);
    syntacticWrites(s->body, scalars, arrays, hasReturn, hasBreak, addrArrays);
    for (const auto& k : s->seq)
        syntacticWrites(k, scalars, arrays, hasReturn, hasBreak, addrArrays);
}

struct BodyWalker {
    AnalysisContext& ctx;
    const SymbolicPath& pre;
    LoopInfo& info;

    struct Frame {
        std::map<std::string, SymExpr> env;        // written scalars
        std::map<std::string, SymAddr> addrs;      // iteration-local address vars
        std::vector<BoolAtom> conds;
        bool condsAtomic = true;
        bool broke = false;
        bool dead = false;
    };

    std::vector<Frame> done;

    SymExpr evalExpr(Frame& f, const IrExprPtr& e) {
        switch (e->kind) {
        case IrExpr::Kind::Const: return constExpr(e->value);
        case IrExpr::Kind::IntVar: {
            auto it = f.env.find(e->name);
            if (it != f.env.end())
                return it->second;
            return preScalar(pre, e->name);
        }
        case IrExpr::Kind::AddrVar:
            throw Error(ErrKind::Internal, "address variable in arithmetic position");
        case IrExpr::Kind::BinOp: {
            SymExpr l = evalExpr(f, e->lhs);
            SymExpr r = evalExpr(f, e->rhs);
            switch (e->op) {
            case BinIntOp::Add: return add(l, r);
            case BinIntOp::Sub: return sub(l, r);
            case BinIntOp::Mul: return mul(l, r);
            }
            return l;
        }
        case IrExpr::Kind::Read: {
            auto it = f.addrs.find(e->name);
            if (it == f.addrs.end())
                throw Error(ErrKind::Internal, "read through unbound address variable");
            return atomExpr(makeReadAtom(it->second, pre.state.epochOf(it->second.base)));
        }
        }
        throw Error(ErrKind::Internal, "unreachable");
    }

    // Atomic conjunction of the guard, when it is one; otherwise marks the
    // frame non-atomic and returns the best-effort list.
    std::vector<BoolAtom> evalCond(Frame& f, const IrBoolPtr& b, bool negated) {
        switch (b->kind) {
        case IrBool::Kind::Cmp: {
            SymExpr l = evalExpr(f, b->lhs);
            SymExpr r = evalExpr(f, b->rhs);
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
            return {atom};
        }
        case IrBool::Kind::Not: return evalCond(f, b->a, !negated);
        case IrBool::Kind::And:
            if (!negated) {
                auto l = evalCond(f, b->a, false);
                auto r = evalCond(f, b->b, false);
                l.insert(l.end(), r.begin(), r.end());
                return l;
            }
            f.condsAtomic = false;
            return {};
        case IrBool::Kind::Or:
            if (negated) {
                auto l = evalCond(f, b->a, true);
                auto r = evalCond(f, b->b, true);
                l.insert(l.end(), r.begin(), r.end());
                return l;
            }
            f.condsAtomic = false;
            return {};
        }
        return {};
    }

    void exec(const IrStmtPtr& s, std::vector<Frame>& frames) {
        if (!s)
            return;
        switch (s->kind) {
        case IrStmt::Kind::Seq:
            for (const auto& k : s->seq) {
                exec(k, frames);
                frames.erase(std::remove_if(frames.begin(), frames.end(),
                                            [](const Frame& f) { return f.dead; }),
                             frames.end());
                if (frames.empty())
                    return;
            }
            return;
        case IrStmt::Kind::Assign:
            for (auto& f : frames)
                f.env[s->name] = evalExpr(f, s->expr);
            return;
        case IrStmt::Kind::AddrElem:
            for (auto& f : frames) {
                AtomPtr base = arrayBlockOf(ctx, s->arrayName);
                f.addrs[s->name] = SymAddr{base, evalExpr(f, s->index)};
            }
            return;
        case IrStmt::Kind::Write:
            for (auto& f : frames) {
                const SymAddr& a = f.addrs.at(s->name);
                LoopWrite w;
                w.base = a.base;
                w.array = ctx.arrayOfBase(a.base);
                w.offset = a.offset;
                w.value = evalExpr(f, s->expr);
                w.conds = f.conds;
                info.writes.push_back(std::move(w));
            }
            return;
        case IrStmt::Kind::If: {
            std::vector<Frame> out;
            for (auto& f : frames) {
                Frame t = f;
                auto condsT = evalCond(t, s->cond, false);
                t.conds.insert(t.conds.end(), condsT.begin(), condsT.end());
                Frame e = f;
                auto condsE = evalCond(e, s->cond, true);
                e.conds.insert(e.conds.end(), condsE.begin(), condsE.end());
                std::vector<Frame> tf{std::move(t)}, ef{std::move(e)};
                exec(s->thenS, tf);
                exec(s->elseS, ef);
                for (auto& x : tf)
                    out.push_back(std::move(x));
                for (auto& x : ef)
                    out.push_back(std::move(x));
            }
            if (out.size() > kMaxBodyPaths) {
                info.recognized = false;
                info.whyNot = "loop body branches beyond the exploration budget";
                out.resize(kMaxBodyPaths);
            }
            frames = std::move(out);
            return;
        }
        case IrStmt::Kind::Break:
            for (auto& f : frames) {
                f.broke = true;
                done.push_back(f);
                f.dead = true;
            }
            return;
        case IrStmt::Kind::Return:
            info.hasReturn = true;
            for (auto& f : frames)
                f.dead = true;
            return;
        case IrStmt::Kind::While:
            throw Error(ErrKind::Internal, "nested loop survived validation");
        }
    }
};

void collectGenerics(const SymExpr& e, const LoopInfo& info, std::set<uint32_t>& out) {
    std::set<uint32_t> syms;
    collectSyms(e, syms);
    for (const auto& [v, g] : info.genericOf)
        if (syms.count(g))
            out.insert(g);
}

} // namespace

bool LoopInfo::mentionsOtherGenerics(const SymExpr& e) const {
    std::set<uint32_t> gs;
    collectGenerics(e, *this, gs);
    gs.erase(iterSym);
    return !gs.empty();
}

LoopInfo extractLoopInfo(AnalysisContext& ctx, const IrStmt& loop, const SymbolicPath& pre) {
    LoopInfo info;
    info.loopId = loop.loopId;
    info.guardIr = loop.cond;

    std::map<std::string, std::string> addrArrays;
    syntacticWrites(loop.body, info.writtenScalars, info.writtenArrays, info.hasReturn,
                    info.hasBreak, addrArrays);
    for (const auto& [a, ar] : addrArrays)
        info.readArrays.insert(ar);

    if (info.hasReturn) {
        info.whyNot = "return inside loop body";
        return info;
    }

    for (const auto& v : info.writtenScalars)
        info.genericOf[v] = ctx.freshSym(SymOrigin::BoundIndex, "it_" + v, loop.loopId);

    BodyWalker walker{ctx, pre, info, {}};
    BodyWalker::Frame f0;
    for (const auto& [v, g] : info.genericOf)
        f0.env[v] = symExpr(g);
    std::vector<BodyWalker::Frame> frames{f0};
    walker.exec(loop.body, frames);
    for (auto& f : frames)
        if (!f.dead)
            walker.done.push_back(std::move(f));

    for (auto& f : walker.done) {
        LoopBodyPath p;
        p.conds = std::move(f.conds);
        p.condsAtomic = f.condsAtomic;
        p.broke = f.broke;
        p.finalEnv = std::move(f.env);
        info.paths.push_back(std::move(p));
    }

    if (!info.whyNot.empty())
        return info;

    // Iterator: the unique constant-step scalar appearing in the guard.
    std::map<std::string, long long> steps;
    bool sawNormalPath = false;
    for (const auto& p : info.paths) {
        if (p.broke)
            continue;
        sawNormalPath = true;
        for (const auto& [v, g] : info.genericOf) {
            auto it = p.finalEnv.find(v);
            SymExpr fin = it == p.finalEnv.end() ? symExpr(g) : it->second;
            SymExpr delta = sub(fin, symExpr(g));
            auto c = delta.asConst();
            long long step = c ? *c : LLONG_MIN; // LLONG_MIN: not constant
            auto [pos, inserted] = steps.emplace(v, step);
            if (!inserted && pos->second != step)
                pos->second = LLONG_MIN;
        }
    }
    if (!sawNormalPath) {
        info.whyNot = "every body path breaks";
        return info;
    }

    std::set<std::string> guardVars;
    {
        std::vector<IrExprPtr> work;
        std::vector<IrBoolPtr> bwork{loop.cond};
        while (!bwork.empty()) {
            IrBoolPtr b = bwork.back();
            bwork.pop_back();
            if (!b)
                continue;
            if (b->kind == IrBool::Kind::Cmp) {
                work.push_back(b->lhs);
                work.push_back(b->rhs);
            }
            bwork.push_back(b->a);
            bwork.push_back(b->b);
        }
        while (!work.empty()) {
            IrExprPtr e = work.back();
            work.pop_back();
            if (!e)
                continue;
            if (e->kind == IrExpr::Kind::IntVar)
                guardVars.insert(e->name);
            work.push_back(e->lhs);
            work.push_back(e->rhs);
        }
    }

    std::vector<std::string> candidates;
    for (const auto& [v, st] : steps)
        if (st != LLONG_MIN && st != 0 && guardVars.count(v))
            candidates.push_back(v);
    if (candidates.size() != 1) {
        info.whyNot = candidates.empty() ? "no constant-step guard variable"
                                         : "multiple constant-step guard variables";
        return info;
    }
    info.iterator = candidates[0];
    info.iterSym = info.genericOf.at(info.iterator);
    info.step = steps.at(info.iterator);
    info.iterInit = preScalar(pre, info.iterator);

    // Guard shape: a single comparison, affine in the iterator with unit
    // coefficient, gives the bound expression.
    if (loop.cond->kind == IrBool::Kind::Cmp) {
        BodyWalker::Frame gf = f0;
        auto atoms = walker.evalCond(gf, loop.cond, false);
        if (atoms.size() == 1 && gf.condsAtomic) {
            const BoolAtom& g = atoms[0];
            info.guardAtom = g;
            if (auto c = g.e.asConst()) {
                bool truth = g.rel == Rel::Ge0 ? *c >= 0 : g.rel == Rel::Eq0 ? *c == 0 : *c != 0;
                if (truth)
                    info.guardTriviallyTrue = true;
            } else if (g.rel == Rel::Ge0 && !info.mentionsOtherGenerics(g.e)) {
                // g.e >= 0 with g.e = coeff*it + rest
                long long coeff = 0;
                SymExpr rest = g.e;
                for (size_t i = 0; i < rest.terms.size(); ++i) {
                    const auto* sa = std::get_if<SymAtom>(&rest.terms[i].second->v);
                    if (sa && sa->id == info.iterSym) {
                        coeff = rest.terms[i].first;
                        rest.terms.erase(rest.terms.begin() + static_cast<long>(i));
                        break;
                    }
                }
                if (coeff == -1) {
                    // -it + rest >= 0  <=>  it <= rest  <=>  it < rest+1
                    SymExpr b = rest;
                    b.k += 1;
                    info.guardAscending = true;
                    info.bound = b;
                } else if (coeff == 1) {
                    // it + rest >= 0  <=>  it >= -rest  <=>  it > -rest-1
                    SymExpr b = neg(rest);
                    b.k -= 1;
                    info.guardDescending = true;
                    info.bound = b;
                }
            }
        }
    }

    bool directionOk = (info.step > 0 && info.guardAscending) ||
                       (info.step < 0 && info.guardDescending) || !info.bound;
    if (!directionOk) {
        info.whyNot = "guard direction does not match the iterator step";
        return info;
    }

    for (auto& w : info.writes)
        if (info.mentionsOtherGenerics(w.offset) || info.mentionsOtherGenerics(w.value))
            w.patternOk = false;

    info.recognized = true;
    return info;
}

} // namespace arcs
