// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arcs/ast.hpp"

namespace arcs {

// Intermediate syntax: array accesses become explicit address bindings plus
// Read/Write at address variables; calls are inlined away; element size is
// one cell, so offsets equal index expressions.

struct IrExpr;
using IrExprPtr = std::shared_ptr<const IrExpr>;

struct IrExpr {
    enum class Kind { Const, IntVar, AddrVar, BinOp, Read };
    Kind kind;
    long long value = 0;   // Const
    std::string name;      // IntVar / AddrVar / Read's address variable
    BinIntOp op = BinIntOp::Add;
    IrExprPtr lhs, rhs;    // BinOp
};

IrExprPtr irConst(long long v);
IrExprPtr irIntVar(std::string x);
IrExprPtr irBinOp(BinIntOp op, IrExprPtr l, IrExprPtr r);
IrExprPtr irRead(std::string addrVar);

struct IrBool;
using IrBoolPtr = std::shared_ptr<const IrBool>;

struct IrBool {
    enum class Kind { Cmp, Not, And, Or };
    Kind kind;
    CmpOp cmp = CmpOp::Eq;
    IrExprPtr lhs, rhs;
    IrBoolPtr a, b;
};

IrBoolPtr irCmp(CmpOp op, IrExprPtr l, IrExprPtr r);
IrBoolPtr irNot(IrBoolPtr a);
IrBoolPtr irAnd(IrBoolPtr a, IrBoolPtr b);
IrBoolPtr irOr(IrBoolPtr a, IrBoolPtr b);

struct IrStmt;
using IrStmtPtr = std::shared_ptr<IrStmt>; // labels assigned post-build, then immutable

struct IrStmt {
    enum class Kind { Assign, AddrElem, Write, If, While, Seq, Break, Return };
    Kind kind;
    int label = -1;
    std::string name;        // Assign target / AddrElem & Write address variable
    std::string arrayName;   // AddrElem
    IrExprPtr index;         // AddrElem offset (in cells)
    IrExprPtr expr;          // Assign rhs, Write value, Return value (may be null)
    IrBoolPtr cond;          // If / While
    IrStmtPtr thenS, elseS;  // If
    IrStmtPtr body;          // While
    std::vector<IrStmtPtr> seq;
    int loopId = -1;
    SourceLoc loc;
};

struct LoweredFunction {
    IrStmtPtr root;
    std::vector<std::string> intVars;   // scalar params, locals, inlining temps
    std::vector<std::string> arrayVars; // array params
    const FunctionDef* source = nullptr;
    int entryLabel = 0;
    int exitLabel = 0;
    int labelCount = 0;
};

// AST-level call inlining (bottom-up along the call DAG, parameters passed by
// substitution for ints and by base aliasing for arrays). Validation must
// already have passed.
FunctionDef inlineCalls(const Program& prog, const FunctionDef& fd);

LoweredFunction lower(const Program& prog, const FunctionDef& fd);

std::string show(const IrExprPtr& e);
std::string show(const IrBoolPtr& b);
std::string show(const LoweredFunction& lf); // statement-per-line IR dump

// --- CFG view ---

struct Location {
    int id = 0;
    enum class Kind { Entry, LoopHead, Branch, Plain, Exit } kind = Kind::Plain;
};

struct Transition {
    int from = 0, to = 0;
    IrBoolPtr guard;      // null: guard true
    bool negated = false; // the (l, l_else, !b, id) half of a branch pair
    const IrStmt* update = nullptr; // null: identity
};

struct Cfg {
    std::vector<Location> locations;
    std::vector<Transition> transitions;
    int entry = 0;
    int exit = 0;

    const Location* find(int id) const;
    std::vector<const Transition*> outgoing(int id) const;
};

Cfg buildCfg(const LoweredFunction& lf);
std::string show(const Cfg& cfg); // "l1 --[guard]--> l2 : stmt" per transition

} // namespace arcs
