// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/ast.hpp"

namespace arcs {

ExprPtr mkIntConst(long long v, SourceLoc loc) {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::IntConst;
    e->value = v;
    e->loc = loc;
    return e;
}

ExprPtr mkVar(std::string name, SourceLoc loc) {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::Var;
    e->name = std::move(name);
    e->loc = loc;
    return e;
}

ExprPtr mkBinOp(BinIntOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::BinOp;
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->loc = loc;
    return e;
}

ExprPtr mkArrayAccess(std::string arr, ExprPtr idx, SourceLoc loc) {
    auto e = std::make_shared<AstExpr>();
    e->kind = AstExpr::Kind::ArrayAccess;
    e->name = std::move(arr);
    e->index = std::move(idx);
    e->loc = loc;
    return e;
}

BoolPtr mkCmp(CmpOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
    auto b = std::make_shared<AstBool>();
    b->kind = AstBool::Kind::Cmp;
    b->cmp = op;
    b->lhs = std::move(lhs);
    b->rhs = std::move(rhs);
    b->loc = loc;
    return b;
}

BoolPtr mkNot(BoolPtr a, SourceLoc loc) {
    auto b = std::make_shared<AstBool>();
    b->kind = AstBool::Kind::Not;
    b->a = std::move(a);
    b->loc = loc;
    return b;
}

BoolPtr mkAnd(BoolPtr a, BoolPtr bb, SourceLoc loc) {
    auto b = std::make_shared<AstBool>();
    b->kind = AstBool::Kind::And;
    b->a = std::move(a);
    b->b = std::move(bb);
    b->loc = loc;
    return b;
}

BoolPtr mkOr(BoolPtr a, BoolPtr bb, SourceLoc loc) {
    auto b = std::make_shared<AstBool>();
    b->kind = AstBool::Kind::Or;
    b->a = std::move(a);
    b->b = std::move(bb);
    b->loc = loc;
    return b;
}

static std::shared_ptr<AstStmt> stmt(AstStmt::Kind k, SourceLoc loc) {
    auto s = std::make_shared<AstStmt>();
    s->kind = k;
    s->loc = loc;
    return s;
}

StmtPtr mkVarAssign(std::string x, ExprPtr e, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::VarAssign, loc);
    s->name = std::move(x);
    s->expr = std::move(e);
    return s;
}

StmtPtr mkArrAssign(std::string arr, ExprPtr idx, ExprPtr e, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::ArrAssign, loc);
    s->name = std::move(arr);
    s->index = std::move(idx);
    s->expr = std::move(e);
    return s;
}

StmtPtr mkIf(BoolPtr c, StmtPtr t, StmtPtr e, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::If, loc);
    s->cond = std::move(c);
    s->thenS = std::move(t);
    s->elseS = std::move(e);
    return s;
}

StmtPtr mkWhile(BoolPtr c, StmtPtr body, int loopId, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::While, loc);
    s->cond = std::move(c);
    s->body = std::move(body);
    s->loopId = loopId;
    return s;
}

StmtPtr mkSeq(std::vector<StmtPtr> ss, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::Seq, loc);
    s->seq = std::move(ss);
    return s;
}

StmtPtr mkReturn(ExprPtr e, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::Return, loc);
    s->expr = std::move(e);
    return s;
}

StmtPtr mkCall(std::string callee, std::vector<ExprPtr> args, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::Call, loc);
    s->name = std::move(callee);
    s->args = std::move(args);
    return s;
}

StmtPtr mkBreak(SourceLoc loc) { return stmt(AstStmt::Kind::Break, loc); }

StmtPtr mkDecl(std::string x, ExprPtr init, SourceLoc loc) {
    auto s = stmt(AstStmt::Kind::Decl, loc);
    s->name = std::move(x);
    s->expr = std::move(init);
    return s;
}

const FunctionDef* Program::find(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name)
            return &f;
    return nullptr;
}

bool exprEq(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b)
        return !a && !b;
    if (a->kind != b->kind)
        return false;
    switch (a->kind) {
    case AstExpr::Kind::IntConst: return a->value == b->value;
    case AstExpr::Kind::Var: return a->name == b->name;
    case AstExpr::Kind::BinOp:
        return a->op == b->op && exprEq(a->lhs, b->lhs) && exprEq(a->rhs, b->rhs);
    case AstExpr::Kind::ArrayAccess:
        return a->name == b->name && exprEq(a->index, b->index);
    }
    return false;
}

bool boolEq(const BoolPtr& a, const BoolPtr& b) {
    if (!a || !b)
        return !a && !b;
    if (a->kind != b->kind)
        return false;
    switch (a->kind) {
    case AstBool::Kind::Cmp:
        return a->cmp == b->cmp && exprEq(a->lhs, b->lhs) && exprEq(a->rhs, b->rhs);
    case AstBool::Kind::Not: return boolEq(a->a, b->a);
    case AstBool::Kind::And:
    case AstBool::Kind::Or: return boolEq(a->a, b->a) && boolEq(a->b, b->b);
    }
    return false;
}

bool stmtEq(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b)
        return !a && !b;
    if (a->kind != b->kind)
        return false;
    switch (a->kind) {
    case AstStmt::Kind::VarAssign:
    case AstStmt::Kind::Decl:
        return a->name == b->name && exprEq(a->expr, b->expr);
    case AstStmt::Kind::ArrAssign:
        return a->name == b->name && exprEq(a->index, b->index) && exprEq(a->expr, b->expr);
    case AstStmt::Kind::If:
        return boolEq(a->cond, b->cond) && stmtEq(a->thenS, b->thenS) && stmtEq(a->elseS, b->elseS);
    case AstStmt::Kind::While:
        return boolEq(a->cond, b->cond) && stmtEq(a->body, b->body);
    case AstStmt::Kind::Seq: {
        if (a->seq.size() != b->seq.size())
            return false;
        for (size_t i = 0; i < a->seq.size(); ++i)
            if (!stmtEq(a->seq[i], b->seq[i]))
                return false;
        return true;
    }
    case AstStmt::Kind::Return: return exprEq(a->expr, b->expr);
    case AstStmt::Kind::Call: {
        if (a->name != b->name || a->args.size() != b->args.size())
            return false;
        for (size_t i = 0; i < a->args.size(); ++i)
            if (!exprEq(a->args[i], b->args[i]))
                return false;
        return true;
    }
    case AstStmt::Kind::Break: return true;
    }
    return false;
}

} // namespace arcs
