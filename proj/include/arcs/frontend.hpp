// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "arcs/ast.hpp"

namespace arcs {

struct SourceFile {
    std::string path;
    std::string text;
};

SourceFile readSource(const std::string& path);

enum class TokKind {
    Ident, Int,
    KwInt, KwVoid, KwIf, KwElse, KwWhile, KwFor, KwReturn, KwBreak,
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Semi, Comma, Assign, Star,
    Plus, Minus, PlusPlus, MinusMinus,
    EqEq, NotEq, Le, Lt, Ge, Gt, Not, AndAnd, OrOr,
    Annotation,   // whole /*@ ... */ block, raw text preserved
    Reserved,     // operator outside the subset (/ % << >> & | ^ ~ ? :), rejected later
    End,
};

struct Token {
    TokKind kind;
    std::string text;   // Ident name, Annotation payload, Reserved spelling
    long long value = 0;
    SourceLoc loc;
};

// Lexes the whole input; throws Error(Lex) on characters outside the grammar.
std::vector<Token> tokenize(const SourceFile& src);

// Parses one or more function definitions; /*@ requires ...; */ blocks
// immediately preceding a function populate declaredPre.
// Throws Error(Parse) or Error(Unsupported).
Program parse(const std::vector<Token>& tokens);
Program parseSource(const SourceFile& src);

// Parses a standalone boolean expression (the --pre flag).
BoolPtr parseBoolExpr(const std::string& text);

// Structural validation: no nested loops, no recursion (direct or mutual),
// calls form a DAG into void return-free callees, identifiers declared,
// break only inside loops. Throws Error(Unsupported) with a reason.
void validate(const Program& prog);
void validateFunction(const Program& prog, const FunctionDef& fd);

// Canonical pretty-printer; parse(print(f)) is structurally equal to f.
std::string printFunction(const FunctionDef& fd);
std::string printProgram(const Program& prog);
std::string printExpr(const ExprPtr& e);
std::string printBool(const BoolPtr& b);

// Variables assigned anywhere in the body (drives \old rendering).
std::vector<std::string> assignedVars(const FunctionDef& fd);

} // namespace arcs
