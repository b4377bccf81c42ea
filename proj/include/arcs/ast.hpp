// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arcs/diagnostics.hpp"

namespace arcs {

// AST for the supported C subset: integers and int arrays, +/-/* arithmetic,
// comparisons with &&/||/!, if/else, while (for is desugared), break, return,
// and statement-level calls. No division, modulo, shift or bitwise operators.

enum class BinIntOp { Add, Sub, Mul };
enum class CmpOp { Le, Lt, Ge, Gt, Ne, Eq };

struct AstExpr;
using ExprPtr = std::shared_ptr<const AstExpr>;

struct AstExpr {
    enum class Kind { IntConst, Var, BinOp, ArrayAccess };
    Kind kind;
    long long value = 0;    // IntConst
    std::string name;       // Var / ArrayAccess array
    BinIntOp op = BinIntOp::Add;
    ExprPtr lhs, rhs;       // BinOp
    ExprPtr index;          // ArrayAccess
    SourceLoc loc;
};

ExprPtr mkIntConst(long long v, SourceLoc loc = {});
ExprPtr mkVar(std::string name, SourceLoc loc = {});
ExprPtr mkBinOp(BinIntOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr mkArrayAccess(std::string arr, ExprPtr idx, SourceLoc loc = {});

struct AstBool;
using BoolPtr = std::shared_ptr<const AstBool>;

struct AstBool {
    enum class Kind { Cmp, Not, And, Or };
    Kind kind;
    CmpOp cmp = CmpOp::Eq;
    ExprPtr lhs, rhs; // Cmp
    BoolPtr a, b;     // Not (a) / And / Or
    SourceLoc loc;
};

BoolPtr mkCmp(CmpOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
BoolPtr mkNot(BoolPtr a, SourceLoc loc = {});
BoolPtr mkAnd(BoolPtr a, BoolPtr b, SourceLoc loc = {});
BoolPtr mkOr(BoolPtr a, BoolPtr b, SourceLoc loc = {});

struct AstStmt;
using StmtPtr = std::shared_ptr<const AstStmt>;

struct AstStmt {
    enum class Kind { VarAssign, ArrAssign, If, While, Seq, Return, Call, Break, Decl };
    Kind kind;
    std::string name;            // VarAssign/Decl var, ArrAssign array, Call callee
    ExprPtr index;               // ArrAssign
    ExprPtr expr;                // VarAssign/ArrAssign rhs, Return value, Decl initializer
    BoolPtr cond;                // If / While
    StmtPtr thenS, elseS;        // If (elseS may be null)
    StmtPtr body;                // While
    std::vector<StmtPtr> seq;    // Seq
    std::vector<ExprPtr> args;   // Call
    int loopId = -1;             // While, assigned in parse order per function
    SourceLoc loc;
};

StmtPtr mkVarAssign(std::string x, ExprPtr e, SourceLoc loc = {});
StmtPtr mkArrAssign(std::string arr, ExprPtr idx, ExprPtr e, SourceLoc loc = {});
StmtPtr mkIf(BoolPtr c, StmtPtr t, StmtPtr e, SourceLoc loc = {});
StmtPtr mkWhile(BoolPtr c, StmtPtr body, int loopId, SourceLoc loc = {});
StmtPtr mkSeq(std::vector<StmtPtr> ss, SourceLoc loc = {});
StmtPtr mkReturn(ExprPtr e, SourceLoc loc = {});
StmtPtr mkCall(std::string callee, std::vector<ExprPtr> args, SourceLoc loc = {});
StmtPtr mkBreak(SourceLoc loc = {});
StmtPtr mkDecl(std::string x, ExprPtr init, SourceLoc loc = {});

struct Param {
    std::string name;
    bool isArray = false;
};

struct FunctionDef {
    std::string name;
    std::vector<Param> params;
    bool returnsInt = true; // false: void
    StmtPtr body;
    BoolPtr declaredPre;    // from /*@ requires ...; */, null means true
    std::vector<std::string> locals;
    int loopCount = 0;
    SourceLoc loc;
};

struct Program {
    std::vector<FunctionDef> functions;
    const FunctionDef* find(const std::string& name) const;
};

// Structural equality (ignores source locations).
bool exprEq(const ExprPtr& a, const ExprPtr& b);
bool boolEq(const BoolPtr& a, const BoolPtr& b);
bool stmtEq(const StmtPtr& a, const StmtPtr& b);

} // namespace arcs
