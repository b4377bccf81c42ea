// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/frontend.hpp"

#include <functional>
#include <map>
#include <set>

namespace arcs {

namespace {

[[noreturn]] void reject(const std::string& what, SourceLoc loc) {
    throw Error(ErrKind::Unsupported, "unsupported construct: " + what, loc);
}

struct FnChecker {
    const Program& prog;
    const FunctionDef& fd;
    std::set<std::string> ints, arrays;

    FnChecker(const Program& p, const FunctionDef& f) : prog(p), fd(f) {
        std::set<std::string> seen;
        for (const auto& prm : f.params) {
            if (!seen.insert(prm.name).second)
                reject("duplicate parameter '" + prm.name + "'", f.loc);
            (prm.isArray ? arrays : ints).insert(prm.name);
        }
        for (const auto& l : f.locals) {
            if (seen.count(l) || ints.count(l) || arrays.count(l))
                reject("local '" + l + "' shadows another name", f.loc);
            ints.insert(l);
        }
    }

    void checkExpr(const ExprPtr& e, const std::set<std::string>& defined) {
        switch (e->kind) {
        case AstExpr::Kind::IntConst: return;
        case AstExpr::Kind::Var:
            if (arrays.count(e->name))
                reject("array '" + e->name + "' used as integer", e->loc);
            if (!ints.count(e->name))
                reject("undeclared identifier '" + e->name + "'", e->loc);
            if (!defined.count(e->name))
                reject("use of '" + e->name + "' before assignment", e->loc);
            return;
        case AstExpr::Kind::BinOp:
            checkExpr(e->lhs, defined);
            checkExpr(e->rhs, defined);
            return;
        case AstExpr::Kind::ArrayAccess:
            if (!arrays.count(e->name))
                reject("'" + e->name + "' indexed but not an array", e->loc);
            checkExpr(e->index, defined);
            return;
        }
    }

    void checkBool(const BoolPtr& b, const std::set<std::string>& defined) {
        switch (b->kind) {
        case AstBool::Kind::Cmp:
            checkExpr(b->lhs, defined);
            checkExpr(b->rhs, defined);
            return;
        case AstBool::Kind::Not: checkBool(b->a, defined); return;
        case AstBool::Kind::And:
        case AstBool::Kind::Or:
            checkBool(b->a, defined);
            checkBool(b->b, defined);
            return;
        }
    }

    // Flow-sensitive walk; `defined` grows along straight-line code, branches
    // contribute the intersection of their updates, loop bodies are checked
    // against entry (a body may run zero times).
    void checkStmt(const StmtPtr& s, std::set<std::string>& defined, bool inLoop) {
        switch (s->kind) {
        case AstStmt::Kind::Seq:
            for (const auto& k : s->seq)
                checkStmt(k, defined, inLoop);
            return;
        case AstStmt::Kind::Decl:
            if (s->expr) {
                checkExpr(s->expr, defined);
                defined.insert(s->name);
            }
            return;
        case AstStmt::Kind::VarAssign:
            if (arrays.count(s->name))
                reject("assignment to array variable '" + s->name + "'", s->loc);
            if (!ints.count(s->name))
                reject("undeclared identifier '" + s->name + "'", s->loc);
            checkExpr(s->expr, defined);
            defined.insert(s->name);
            return;
        case AstStmt::Kind::ArrAssign:
            if (!arrays.count(s->name))
                reject("'" + s->name + "' assigned as array but not an array", s->loc);
            checkExpr(s->index, defined);
            checkExpr(s->expr, defined);
            return;
        case AstStmt::Kind::If: {
            checkBool(s->cond, defined);
            std::set<std::string> t = defined, e = defined;
            checkStmt(s->thenS, t, inLoop);
            if (s->elseS)
                checkStmt(s->elseS, e, inLoop);
            for (const auto& v : t)
                if (e.count(v))
                    defined.insert(v);
            return;
        }
        case AstStmt::Kind::While: {
            if (inLoop)
                reject("nested loop", s->loc);
            checkBool(s->cond, defined);
            std::set<std::string> inner = defined;
            checkStmt(s->body, inner, true);
            return;
        }
        case AstStmt::Kind::Return:
            if (s->expr) {
                if (!fd.returnsInt)
                    reject("value returned from void function", s->loc);
                checkExpr(s->expr, defined);
            }
            return;
        case AstStmt::Kind::Call: {
            const FunctionDef* callee = prog.find(s->name);
            if (!callee)
                reject("call to undefined function '" + s->name + "'", s->loc);
            if (callee->name == fd.name)
                reject("recursion in '" + fd.name + "'", s->loc);
            if (callee->returnsInt || hasReturn(callee->body))
                reject("call to returning function '" + s->name + "' (calls are statements)", s->loc);
            if (callee->params.size() != s->args.size())
                reject("call to '" + s->name + "' with wrong arity", s->loc);
            for (size_t i = 0; i < s->args.size(); ++i) {
                const ExprPtr& a = s->args[i];
                if (callee->params[i].isArray) {
                    if (a->kind != AstExpr::Kind::Var || !arrays.count(a->name))
                        reject("array argument of '" + s->name + "' must be an array name", a->loc);
                } else {
                    checkExpr(a, defined);
                }
            }
            return;
        }
        case AstStmt::Kind::Break:
            if (!inLoop)
                reject("break outside loop", s->loc);
            return;
        }
    }

    static bool hasReturn(const StmtPtr& s) {
        if (!s)
            return false;
        if (s->kind == AstStmt::Kind::Return)
            return true;
        if (hasReturn(s->thenS) || hasReturn(s->elseS) || hasReturn(s->body))
            return true;
        for (const auto& k : s->seq)
            if (hasReturn(k))
                return true;
        return false;
    }

    void checkPre(const BoolPtr& pre) {
        if (!pre)
            return;
        // Preconditions may additionally reference the implicit array lengths.
        std::set<std::string> ok = ints;
        for (const auto& a : arrays)
            ok.insert("len_" + a);
        checkPreBool(pre, ok);
    }

    void checkPreBool(const BoolPtr& b, const std::set<std::string>& ok) {
        switch (b->kind) {
        case AstBool::Kind::Cmp:
            checkPreExpr(b->lhs, ok);
            checkPreExpr(b->rhs, ok);
            return;
        case AstBool::Kind::Not: checkPreBool(b->a, ok); return;
        default:
            checkPreBool(b->a, ok);
            checkPreBool(b->b, ok);
            return;
        }
    }

    void checkPreExpr(const ExprPtr& e, const std::set<std::string>& ok) {
        switch (e->kind) {
        case AstExpr::Kind::IntConst: return;
        case AstExpr::Kind::Var:
            if (!ok.count(e->name))
                reject("precondition references unknown '" + e->name + "'", e->loc);
            return;
        case AstExpr::Kind::BinOp:
            checkPreExpr(e->lhs, ok);
            checkPreExpr(e->rhs, ok);
            return;
        case AstExpr::Kind::ArrayAccess:
            if (!arrays.count(e->name))
                reject("precondition indexes unknown array '" + e->name + "'", e->loc);
            checkPreExpr(e->index, ok);
            return;
        }
    }
};

// DFS cycle check over the call graph; also catches mutual recursion.
void checkCallDag(const Program& prog) {
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& f : prog.functions) {
        std::vector<StmtPtr> work{f.body};
        while (!work.empty()) {
            StmtPtr s = work.back();
            work.pop_back();
            if (!s)
                continue;
            if (s->kind == AstStmt::Kind::Call)
                edges[f.name].push_back(s->name);
            if (s->thenS) work.push_back(s->thenS);
            if (s->elseS) work.push_back(s->elseS);
            if (s->body) work.push_back(s->body);
            for (const auto& k : s->seq)
                work.push_back(k);
        }
    }
    std::map<std::string, int> state; // 0 new, 1 on stack, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& f) {
        state[f] = 1;
        for (const auto& g : edges[f]) {
            if (state[g] == 1)
                throw Error(ErrKind::Unsupported, "unsupported construct: recursion through '" + g + "'");
            if (state[g] == 0)
                visit(g);
        }
        state[f] = 2;
    };
    for (const auto& f : prog.functions)
        if (state[f.name] == 0)
            visit(f.name);
}

} // namespace

void validateFunction(const Program& prog, const FunctionDef& fd) {
    FnChecker fc(prog, fd);
    std::set<std::string> defined;
    for (const auto& p : fd.params)
        if (!p.isArray)
            defined.insert(p.name);
    fc.checkStmt(fd.body, defined, false);
    fc.checkPre(fd.declaredPre);
}

void validate(const Program& prog) {
    std::set<std::string> names;
    for (const auto& f : prog.functions)
        if (!names.insert(f.name).second)
            throw Error(ErrKind::Unsupported, "unsupported construct: redefinition of '" + f.name + "'", f.loc);
    checkCallDag(prog);
    for (const auto& f : prog.functions)
        validateFunction(prog, f);
}

} // namespace arcs
