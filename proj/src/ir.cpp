// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/ir.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "arcs/diagnostics.hpp"

namespace arcs {

IrExprPtr irConst(long long v) {
    auto e = std::make_shared<IrExpr>();
    e->kind = IrExpr::Kind::Const;
    e->value = v;
    return e;
}

IrExprPtr irIntVar(std::string x) {
    auto e = std::make_shared<IrExpr>();
    e->kind = IrExpr::Kind::IntVar;
    e->name = std::move(x);
    return e;
}

IrExprPtr irBinOp(BinIntOp op, IrExprPtr l, IrExprPtr r) {
    auto e = std::make_shared<IrExpr>();
    e->kind = IrExpr::Kind::BinOp;
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

IrExprPtr irRead(std::string addrVar) {
    auto e = std::make_shared<IrExpr>();
    e->kind = IrExpr::Kind::Read;
    e->name = std::move(addrVar);
    return e;
}

IrBoolPtr irCmp(CmpOp op, IrExprPtr l, IrExprPtr r) {
    auto b = std::make_shared<IrBool>();
    b->kind = IrBool::Kind::Cmp;
    b->cmp = op;
    b->lhs = std::move(l);
    b->rhs = std::move(r);
    return b;
}

IrBoolPtr irNot(IrBoolPtr a) {
    auto b = std::make_shared<IrBool>();
    b->kind = IrBool::Kind::Not;
    b->a = std::move(a);
    return b;
}

IrBoolPtr irAnd(IrBoolPtr a, IrBoolPtr bb) {
    auto b = std::make_shared<IrBool>();
    b->kind = IrBool::Kind::And;
    b->a = std::move(a);
    b->b = std::move(bb);
    return b;
}

IrBoolPtr irOr(IrBoolPtr a, IrBoolPtr bb) {
    auto b = std::make_shared<IrBool>();
    b->kind = IrBool::Kind::Or;
    b->a = std::move(a);
    b->b = std::move(bb);
    return b;
}

// ---- AST-level call inlining ----

namespace {

ExprPtr renameExpr(const ExprPtr& e, const std::map<std::string, ExprPtr>& env,
                   const std::map<std::string, std::string>& arrays) {
    if (!e)
        return e;
    switch (e->kind) {
    case AstExpr::Kind::IntConst: return e;
    case AstExpr::Kind::Var: {
        auto it = env.find(e->name);
        return it == env.end() ? e : it->second;
    }
    case AstExpr::Kind::BinOp:
        return mkBinOp(e->op, renameExpr(e->lhs, env, arrays), renameExpr(e->rhs, env, arrays), e->loc);
    case AstExpr::Kind::ArrayAccess: {
        auto it = arrays.find(e->name);
        return mkArrayAccess(it == arrays.end() ? e->name : it->second,
                             renameExpr(e->index, env, arrays), e->loc);
    }
    }
    return e;
}

BoolPtr renameBool(const BoolPtr& b, const std::map<std::string, ExprPtr>& env,
                   const std::map<std::string, std::string>& arrays) {
    if (!b)
        return b;
    switch (b->kind) {
    case AstBool::Kind::Cmp:
        return mkCmp(b->cmp, renameExpr(b->lhs, env, arrays), renameExpr(b->rhs, env, arrays), b->loc);
    case AstBool::Kind::Not: return mkNot(renameBool(b->a, env, arrays), b->loc);
    case AstBool::Kind::And:
        return mkAnd(renameBool(b->a, env, arrays), renameBool(b->b, env, arrays), b->loc);
    case AstBool::Kind::Or:
        return mkOr(renameBool(b->a, env, arrays), renameBool(b->b, env, arrays), b->loc);
    }
    return b;
}

struct Inliner {
    const Program& prog;
    int siteCounter = 0;
    std::vector<std::string> extraLocals;
    int loopCounter = 0; // renumber loops across splices

    StmtPtr renameStmt(const StmtPtr& s, const std::map<std::string, ExprPtr>& env,
                       const std::map<std::string, std::string>& arrays,
                       const std::string& prefix) {
        if (!s)
            return s;
        switch (s->kind) {
        case AstStmt::Kind::Seq: {
            std::vector<StmtPtr> ss;
            for (const auto& k : s->seq)
                ss.push_back(renameStmt(k, env, arrays, prefix));
            return mkSeq(std::move(ss), s->loc);
        }
        case AstStmt::Kind::Decl: {
            std::string nn = prefix + s->name;
            return mkDecl(nn, s->expr ? renameExpr(s->expr, env, arrays) : nullptr, s->loc);
        }
        case AstStmt::Kind::VarAssign: {
            auto it = env.find(s->name);
            std::string target = s->name;
            if (it != env.end())
                target = it->second->name; // renamed Var
            return mkVarAssign(target, renameExpr(s->expr, env, arrays), s->loc);
        }
        case AstStmt::Kind::ArrAssign: {
            auto it = arrays.find(s->name);
            return mkArrAssign(it == arrays.end() ? s->name : it->second,
                               renameExpr(s->index, env, arrays),
                               renameExpr(s->expr, env, arrays), s->loc);
        }
        case AstStmt::Kind::If:
            return mkIf(renameBool(s->cond, env, arrays), renameStmt(s->thenS, env, arrays, prefix),
                        renameStmt(s->elseS, env, arrays, prefix), s->loc);
        case AstStmt::Kind::While:
            return mkWhile(renameBool(s->cond, env, arrays),
                           renameStmt(s->body, env, arrays, prefix), loopCounter++, s->loc);
        case AstStmt::Kind::Return: return mkReturn(s->expr ? renameExpr(s->expr, env, arrays) : nullptr, s->loc);
        case AstStmt::Kind::Break: return s;
        case AstStmt::Kind::Call:
            throw Error(ErrKind::Internal, "call survived inlining order");
        }
        return s;
    }

    StmtPtr inlineStmt(const StmtPtr& s) {
        if (!s)
            return s;
        switch (s->kind) {
        case AstStmt::Kind::Seq: {
            std::vector<StmtPtr> ss;
            for (const auto& k : s->seq)
                ss.push_back(inlineStmt(k));
            return mkSeq(std::move(ss), s->loc);
        }
        case AstStmt::Kind::If:
            return mkIf(s->cond, inlineStmt(s->thenS), inlineStmt(s->elseS), s->loc);
        case AstStmt::Kind::While: return mkWhile(s->cond, inlineStmt(s->body), loopCounter++, s->loc);
        case AstStmt::Kind::Call: {
            const FunctionDef* callee = prog.find(s->name);
            if (!callee)
                throw Error(ErrKind::Internal, "call to unknown function after validation");
            std::string prefix = s->name + "$" + std::to_string(siteCounter++) + "$";
            std::map<std::string, ExprPtr> env;
            std::map<std::string, std::string> arrays;
            std::vector<StmtPtr> splice;
            for (size_t i = 0; i < callee->params.size(); ++i) {
                const Param& p = callee->params[i];
                if (p.isArray) {
                    arrays[p.name] = s->args[i]->name; // validated: array name
                } else {
                    std::string tmp = prefix + p.name;
                    extraLocals.push_back(tmp);
                    splice.push_back(mkDecl(tmp, s->args[i], s->loc));
                    env[p.name] = mkVar(tmp, s->loc);
                }
            }
            for (const auto& l : callee->locals) {
                env[l] = mkVar(prefix + l, s->loc);
                extraLocals.push_back(prefix + l);
            }
            // callee bodies are call-free at this point (reverse topological order)
            StmtPtr body = renameStmt(inlineStmt(callee->body), env, arrays, prefix);
            splice.push_back(body);
            return mkSeq(std::move(splice), s->loc);
        }
        default: return s;
        }
    }
};

} // namespace

FunctionDef inlineCalls(const Program& prog, const FunctionDef& fd) {
    Inliner in{prog};
    FunctionDef out = fd;
    out.body = in.inlineStmt(fd.body);
    out.loopCount = in.loopCounter;
    for (const auto& l : in.extraLocals)
        out.locals.push_back(l);
    return out;
}

// ---- lowering ----

namespace {

struct Lowerer {
    int nextAddr = 0;

    IrStmtPtr stmt(IrStmt::Kind k) {
        auto s = std::make_shared<IrStmt>();
        s->kind = k;
        return s;
    }

    std::string freshAddr() { return "@a" + std::to_string(nextAddr++); }

    IrExprPtr lowerExpr(const ExprPtr& e, std::vector<IrStmtPtr>& prelude) {
        switch (e->kind) {
        case AstExpr::Kind::IntConst: return irConst(e->value);
        case AstExpr::Kind::Var: return irIntVar(e->name);
        case AstExpr::Kind::BinOp:
            return irBinOp(e->op, lowerExpr(e->lhs, prelude), lowerExpr(e->rhs, prelude));
        case AstExpr::Kind::ArrayAccess: {
            IrExprPtr idx = lowerExpr(e->index, prelude);
            auto bind = stmt(IrStmt::Kind::AddrElem);
            bind->name = freshAddr();
            bind->arrayName = e->name;
            bind->index = idx;
            bind->loc = e->loc;
            prelude.push_back(bind);
            return irRead(bind->name);
        }
        }
        throw Error(ErrKind::Internal, "unreachable expr kind");
    }

    IrBoolPtr lowerBool(const BoolPtr& b, std::vector<IrStmtPtr>& prelude) {
        switch (b->kind) {
        case AstBool::Kind::Cmp:
            return irCmp(b->cmp, lowerExpr(b->lhs, prelude), lowerExpr(b->rhs, prelude));
        case AstBool::Kind::Not: return irNot(lowerBool(b->a, prelude));
        case AstBool::Kind::And:
            return irAnd(lowerBool(b->a, prelude), lowerBool(b->b, prelude));
        case AstBool::Kind::Or:
            return irOr(lowerBool(b->a, prelude), lowerBool(b->b, prelude));
        }
        throw Error(ErrKind::Internal, "unreachable bool kind");
    }

    void lowerInto(const StmtPtr& s, std::vector<IrStmtPtr>& out) {
        if (!s)
            return;
        switch (s->kind) {
        case AstStmt::Kind::Seq:
            for (const auto& k : s->seq)
                lowerInto(k, out);
            return;
        case AstStmt::Kind::Decl:
            if (s->expr) {
                auto a = stmt(IrStmt::Kind::Assign);
                a->name = s->name;
                a->expr = lowerExpr(s->expr, out);
                a->loc = s->loc;
                out.push_back(std::move(a));
            }
            return;
        case AstStmt::Kind::VarAssign: {
            auto a = stmt(IrStmt::Kind::Assign);
            a->name = s->name;
            a->expr = lowerExpr(s->expr, out);
            a->loc = s->loc;
            out.push_back(std::move(a));
            return;
        }
        case AstStmt::Kind::ArrAssign: {
            IrExprPtr idx = lowerExpr(s->index, out);
            IrExprPtr val = lowerExpr(s->expr, out);
            auto bind = stmt(IrStmt::Kind::AddrElem);
            bind->name = freshAddr();
            bind->arrayName = s->name;
            bind->index = idx;
            bind->loc = s->loc;
            std::string a = bind->name;
            out.push_back(std::move(bind));
            auto w = stmt(IrStmt::Kind::Write);
            w->name = a;
            w->expr = val;
            w->loc = s->loc;
            out.push_back(std::move(w));
            return;
        }
        case AstStmt::Kind::If: {
            IrBoolPtr c = lowerBool(s->cond, out);
            auto node = stmt(IrStmt::Kind::If);
            node->cond = c;
            node->loc = s->loc;
            std::vector<IrStmtPtr> t, e;
            lowerInto(s->thenS, t);
            if (s->elseS)
                lowerInto(s->elseS, e);
            node->thenS = seqOf(std::move(t), s->loc);
            node->elseS = seqOf(std::move(e), s->loc);
            out.push_back(std::move(node));
            return;
        }
        case AstStmt::Kind::While: {
            std::vector<IrStmtPtr> prelude;
            IrBoolPtr c = lowerBool(s->cond, prelude);
            std::vector<IrStmtPtr> body;
            lowerInto(s->body, body);
            // Guards that read arrays need their address bindings re-established
            // before each re-evaluation.
            for (const auto& p : prelude)
                body.push_back(p);
            for (const auto& p : prelude)
                out.push_back(p);
            auto node = stmt(IrStmt::Kind::While);
            node->cond = c;
            node->loopId = s->loopId;
            node->body = seqOf(std::move(body), s->loc);
            node->loc = s->loc;
            out.push_back(std::move(node));
            return;
        }
        case AstStmt::Kind::Return: {
            auto node = stmt(IrStmt::Kind::Return);
            if (s->expr)
                node->expr = lowerExpr(s->expr, out);
            node->loc = s->loc;
            out.push_back(std::move(node));
            return;
        }
        case AstStmt::Kind::Break: {
            out.push_back(stmt(IrStmt::Kind::Break));
            return;
        }
        case AstStmt::Kind::Call:
            throw Error(ErrKind::Internal, "call reached lowering");
        }
    }

    static IrStmtPtr seqOf(std::vector<IrStmtPtr> ss, SourceLoc loc) {
        auto s = std::make_shared<IrStmt>();
        s->kind = IrStmt::Kind::Seq;
        s->seq = std::move(ss);
        s->loc = loc;
        return s;
    }
};

int numberStmts(const IrStmtPtr& s, int next) {
    if (!s)
        return next;
    s->label = next++;
    if (s->thenS)
        next = numberStmts(s->thenS, next);
    if (s->elseS)
        next = numberStmts(s->elseS, next);
    if (s->body)
        next = numberStmts(s->body, next);
    for (const auto& k : s->seq)
        next = numberStmts(k, next);
    return next;
}

} // namespace

LoweredFunction lower(const Program& prog, const FunctionDef& fd) {
    FunctionDef flat = inlineCalls(prog, fd);
    Lowerer lw;
    std::vector<IrStmtPtr> body;
    lw.lowerInto(flat.body, body);
    LoweredFunction lf;
    lf.root = Lowerer::seqOf(std::move(body), fd.loc);
    lf.source = &fd;
    for (const auto& p : fd.params)
        (p.isArray ? lf.arrayVars : lf.intVars).push_back(p.name);
    for (const auto& l : flat.locals)
        lf.intVars.push_back(l);
    lf.entryLabel = 0;
    lf.labelCount = numberStmts(lf.root, 1);
    lf.exitLabel = lf.labelCount; // one synthetic exit location
    return lf;
}

std::string show(const IrExprPtr& e) {
    switch (e->kind) {
    case IrExpr::Kind::Const: return std::to_string(e->value);
    case IrExpr::Kind::IntVar: return e->name;
    case IrExpr::Kind::AddrVar: return e->name;
    case IrExpr::Kind::Read: return "R(" + e->name + ")";
    case IrExpr::Kind::BinOp: {
        const char* op = e->op == BinIntOp::Add ? " + " : e->op == BinIntOp::Sub ? " - " : " * ";
        return "(" + show(e->lhs) + op + show(e->rhs) + ")";
    }
    }
    return "?";
}

std::string show(const IrBoolPtr& b) {
    switch (b->kind) {
    case IrBool::Kind::Cmp: {
        const char* op = b->cmp == CmpOp::Le ? " <= "
                       : b->cmp == CmpOp::Lt ? " < "
                       : b->cmp == CmpOp::Ge ? " >= "
                       : b->cmp == CmpOp::Gt ? " > "
                       : b->cmp == CmpOp::Ne ? " != "
                                             : " == ";
        return show(b->lhs) + op + show(b->rhs);
    }
    case IrBool::Kind::Not: return "!(" + show(b->a) + ")";
    case IrBool::Kind::And: return "(" + show(b->a) + " && " + show(b->b) + ")";
    case IrBool::Kind::Or: return "(" + show(b->a) + " || " + show(b->b) + ")";
    }
    return "?";
}

namespace {

std::string stmtText(const IrStmt& s) {
    switch (s.kind) {
    case IrStmt::Kind::Assign: return s.name + " := " + show(s.expr);
    case IrStmt::Kind::AddrElem:
        return s.name + " := addr(" + s.arrayName + ", " + show(s.index) + ")";
    case IrStmt::Kind::Write: return "W(" + s.name + ", " + show(s.expr) + ")";
    case IrStmt::Kind::If: return "if " + show(s.cond);
    case IrStmt::Kind::While: return "while " + show(s.cond);
    case IrStmt::Kind::Seq: return "seq";
    case IrStmt::Kind::Break: return "break";
    case IrStmt::Kind::Return: return s.expr ? "return " + show(s.expr) : "return";
    }
    return "?";
}

void dumpStmt(std::ostringstream& os, const IrStmtPtr& s, int depth) {
    if (!s)
        return;
    if (s->kind == IrStmt::Kind::Seq) {
        for (const auto& k : s->seq)
            dumpStmt(os, k, depth);
        return;
    }
    for (int i = 0; i < depth; ++i)
        os << "  ";
    os << "l" << s->label << ": " << stmtText(*s) << "\n";
    if (s->kind == IrStmt::Kind::If) {
        dumpStmt(os, s->thenS, depth + 1);
        bool elseEmpty = !s->elseS || (s->elseS->kind == IrStmt::Kind::Seq && s->elseS->seq.empty());
        if (!elseEmpty) {
            for (int i = 0; i < depth; ++i)
                os << "  ";
            os << "else:\n";
            dumpStmt(os, s->elseS, depth + 1);
        }
    } else if (s->kind == IrStmt::Kind::While) {
        dumpStmt(os, s->body, depth + 1);
    }
}

} // namespace

std::string show(const LoweredFunction& lf) {
    std::ostringstream os;
    dumpStmt(os, lf.root, 0);
    os << "l" << lf.exitLabel << ": exit\n";
    return os.str();
}

// ---- CFG ----

namespace {

struct CfgBuilder {
    Cfg cfg;
    std::map<int, Location::Kind> kinds;

    void loc(int id, Location::Kind k) {
        auto it = kinds.find(id);
        if (it == kinds.end() || it->second == Location::Kind::Plain)
            kinds[id] = k;
    }

    void edge(int from, int to, IrBoolPtr guard, bool negated, const IrStmt* update) {
        cfg.transitions.push_back(Transition{from, to, std::move(guard), negated, update});
    }

    // Connects stmt so control enters at its label and leaves to `next`.
    // Returns the entry label of the statement (or `next` for empty seqs).
    int build(const IrStmtPtr& s, int next, int breakTarget, int exitLabel) {
        if (!s)
            return next;
        switch (s->kind) {
        case IrStmt::Kind::Seq: {
            int after = next;
            for (auto it = s->seq.rbegin(); it != s->seq.rend(); ++it)
                after = build(*it, after, breakTarget, exitLabel);
            return after;
        }
        case IrStmt::Kind::Assign:
        case IrStmt::Kind::AddrElem:
        case IrStmt::Kind::Write:
            loc(s->label, Location::Kind::Plain);
            edge(s->label, next, nullptr, false, s.get());
            return s->label;
        case IrStmt::Kind::If: {
            loc(s->label, Location::Kind::Branch);
            int thenEntry = build(s->thenS, next, breakTarget, exitLabel);
            int elseEntry = build(s->elseS, next, breakTarget, exitLabel);
            edge(s->label, thenEntry, s->cond, false, nullptr);
            edge(s->label, elseEntry, s->cond, true, nullptr);
            return s->label;
        }
        case IrStmt::Kind::While: {
            loc(s->label, Location::Kind::LoopHead);
            int bodyEntry = build(s->body, s->label, next, exitLabel);
            edge(s->label, bodyEntry, s->cond, false, nullptr);
            edge(s->label, next, s->cond, true, nullptr);
            return s->label;
        }
        case IrStmt::Kind::Break:
            loc(s->label, Location::Kind::Plain);
            edge(s->label, breakTarget, nullptr, false, nullptr);
            return s->label;
        case IrStmt::Kind::Return:
            loc(s->label, Location::Kind::Plain);
            edge(s->label, exitLabel, nullptr, false, s.get());
            return s->label;
        }
        return next;
    }
};

} // namespace

Cfg buildCfg(const LoweredFunction& lf) {
    CfgBuilder b;
    int entry = b.build(lf.root, lf.exitLabel, -1, lf.exitLabel);
    b.cfg.entry = entry;
    b.cfg.exit = lf.exitLabel;
    b.kinds[lf.exitLabel] = Location::Kind::Exit;
    if (b.kinds.count(entry) == 0)
        b.kinds[entry] = Location::Kind::Entry;
    for (const auto& [id, k] : b.kinds)
        b.cfg.locations.push_back(Location{id, id == entry ? Location::Kind::Entry : k});
    return b.cfg;
}

const Location* Cfg::find(int id) const {
    for (const auto& l : locations)
        if (l.id == id)
            return &l;
    return nullptr;
}

std::vector<const Transition*> Cfg::outgoing(int id) const {
    std::vector<const Transition*> out;
    for (const auto& t : transitions)
        if (t.from == id)
            out.push_back(&t);
    return out;
}

std::string show(const Cfg& cfg) {
    std::ostringstream os;
    std::vector<Transition> ts = cfg.transitions;
    std::sort(ts.begin(), ts.end(), [](const Transition& a, const Transition& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    for (const auto& t : ts) {
        std::string guard = "true";
        if (t.guard)
            guard = t.negated ? "!(" + show(t.guard) + ")" : show(t.guard);
        os << "l" << t.from << " --[" << guard << "]--> l" << t.to << " : "
           << (t.update ? stmtText(*t.update) : "id") << "\n";
    }
    return os.str();
}

} // namespace arcs
