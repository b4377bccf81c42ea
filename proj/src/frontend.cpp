// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace arcs {

SourceFile readSource(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrKind::Parse, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return SourceFile{path, ss.str()};
}

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& text) : s(text) {}

    SourceLoc here() const { return {line, col}; }
    char peek(size_t off = 0) const { return pos + off < s.size() ? s[pos + off] : '\0'; }

    void advance() {
        if (pos < s.size()) {
            if (s[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void advanceN(size_t n) {
        while (n--)
            advance();
    }
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

std::vector<Token> tokenize(const SourceFile& src) {
    Lexer lx(src.text);
    std::vector<Token> out;
    auto push = [&](TokKind k, SourceLoc loc, std::string text = {}, long long v = 0) {
        out.push_back(Token{k, std::move(text), v, loc});
    };

    while (lx.pos < lx.s.size()) {
        char c = lx.peek();
        SourceLoc loc = lx.here();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            lx.advance();
            continue;
        }
        if (c == '/' && lx.peek(1) == '/') {
            while (lx.pos < lx.s.size() && lx.peek() != '\n')
                lx.advance();
            continue;
        }
        if (c == '/' && lx.peek(1) == '*') {
            bool annot = lx.peek(2) == '@';
            lx.advanceN(annot ? 3 : 2);
            std::string body;
            while (lx.pos < lx.s.size() && !(lx.peek() == '*' && lx.peek(1) == '/')) {
                body.push_back(lx.peek());
                lx.advance();
            }
            if (lx.pos >= lx.s.size())
                throw Error(ErrKind::Lex, "unterminated comment", loc);
            lx.advanceN(2);
            if (annot)
                push(TokKind::Annotation, loc, body);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long v = 0;
            while (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
                v = v * 10 + (lx.peek() - '0');
                lx.advance();
            }
            push(TokKind::Int, loc, {}, v);
            continue;
        }
        if (identStart(c)) {
            std::string id;
            if (c == '\\') { // \result in annotations fed back through the parser
                id.push_back(c);
                lx.advance();
            }
            while (identChar(lx.peek())) {
                id.push_back(lx.peek());
                lx.advance();
            }
            TokKind k = TokKind::Ident;
            if (id == "int") k = TokKind::KwInt;
            else if (id == "void") k = TokKind::KwVoid;
            else if (id == "if") k = TokKind::KwIf;
            else if (id == "else") k = TokKind::KwElse;
            else if (id == "while") k = TokKind::KwWhile;
            else if (id == "for") k = TokKind::KwFor;
            else if (id == "return") k = TokKind::KwReturn;
            else if (id == "break") k = TokKind::KwBreak;
            push(k, loc, id);
            continue;
        }
        auto two = [&](char a, char b) { return c == a && lx.peek(1) == b; };
        if (two('=', '=')) { lx.advanceN(2); push(TokKind::EqEq, loc); continue; }
        if (two('!', '=')) { lx.advanceN(2); push(TokKind::NotEq, loc); continue; }
        if (two('<', '=')) { lx.advanceN(2); push(TokKind::Le, loc); continue; }
        if (two('>', '=')) { lx.advanceN(2); push(TokKind::Ge, loc); continue; }
        if (two('&', '&')) { lx.advanceN(2); push(TokKind::AndAnd, loc); continue; }
        if (two('|', '|')) { lx.advanceN(2); push(TokKind::OrOr, loc); continue; }
        if (two('+', '+')) { lx.advanceN(2); push(TokKind::PlusPlus, loc); continue; }
        if (two('-', '-')) { lx.advanceN(2); push(TokKind::MinusMinus, loc); continue; }
        if (two('<', '<') || two('>', '>')) {
            std::string op(1, c);
            op.push_back(c);
            lx.advanceN(2);
            push(TokKind::Reserved, loc, op);
            continue;
        }
        switch (c) {
        case '(': lx.advance(); push(TokKind::LParen, loc); continue;
        case ')': lx.advance(); push(TokKind::RParen, loc); continue;
        case '{': lx.advance(); push(TokKind::LBrace, loc); continue;
        case '}': lx.advance(); push(TokKind::RBrace, loc); continue;
        case '[': lx.advance(); push(TokKind::LBracket, loc); continue;
        case ']': lx.advance(); push(TokKind::RBracket, loc); continue;
        case ';': lx.advance(); push(TokKind::Semi, loc); continue;
        case ',': lx.advance(); push(TokKind::Comma, loc); continue;
        case '=': lx.advance(); push(TokKind::Assign, loc); continue;
        case '+': lx.advance(); push(TokKind::Plus, loc); continue;
        case '-': lx.advance(); push(TokKind::Minus, loc); continue;
        case '*': lx.advance(); push(TokKind::Star, loc); continue;
        case '<': lx.advance(); push(TokKind::Lt, loc); continue;
        case '>': lx.advance(); push(TokKind::Gt, loc); continue;
        case '!': lx.advance(); push(TokKind::Not, loc); continue;
        case '/':
        case '%':
        case '&':
        case '|':
        case '^':
        case '~':
        case '?':
        case ':': lx.advance(); push(TokKind::Reserved, loc, std::string(1, c)); continue;
        default:
            throw Error(ErrKind::Lex, std::string("unexpected character '") + c + "'", loc);
        }
    }
    push(TokKind::End, lx.here());
    return out;
}

namespace {

// Recursive-descent parser with token-position backtracking for the
// expression-vs-boolean parenthesis ambiguity.
struct Parser {
    const std::vector<Token>& ts;
    size_t pos = 0;
    int nextLoop = 0;

    explicit Parser(const std::vector<Token>& tokens) : ts(tokens) {}

    const Token& cur() const { return ts[pos]; }
    SourceLoc loc() const { return cur().loc; }
    bool at(TokKind k) const { return cur().kind == k; }

    bool accept(TokKind k) {
        if (at(k)) {
            ++pos;
            return true;
        }
        return false;
    }

    const Token& expect(TokKind k, const char* what) {
        if (!at(k))
            throw Error(ErrKind::Parse, std::string("expected ") + what, loc());
        return ts[pos++];
    }

    [[noreturn]] void unsupported(const std::string& what, SourceLoc where) {
        throw Error(ErrKind::Unsupported, "unsupported construct: " + what, where);
    }

    // ---- expressions ----

    ExprPtr parsePrimary() {
        SourceLoc at0 = loc();
        if (at(TokKind::Reserved))
            unsupported("operator '" + cur().text + "'", at0);
        if (accept(TokKind::Int))
            return mkIntConst(ts[pos - 1].value, at0);
        if (accept(TokKind::Minus)) // unary minus
            return mkBinOp(BinIntOp::Sub, mkIntConst(0, at0), parsePrimary(), at0);
        if (accept(TokKind::LParen)) {
            ExprPtr e = parseExpr();
            expect(TokKind::RParen, "')'");
            return e;
        }
        if (at(TokKind::Ident)) {
            std::string name = cur().text;
            ++pos;
            if (accept(TokKind::LBracket)) {
                ExprPtr idx = parseExpr();
                expect(TokKind::RBracket, "']'");
                return mkArrayAccess(name, idx, at0);
            }
            if (at(TokKind::LParen))
                unsupported("function call in expression", at0);
            return mkVar(name, at0);
        }
        throw Error(ErrKind::Parse, "expected expression", at0);
    }

    ExprPtr parseMul() {
        ExprPtr e = parsePrimary();
        while (true) {
            SourceLoc l = loc();
            if (at(TokKind::Reserved))
                unsupported("operator '" + cur().text + "'", l);
            if (accept(TokKind::Star))
                e = mkBinOp(BinIntOp::Mul, e, parsePrimary(), l);
            else
                break;
        }
        return e;
    }

    ExprPtr parseExpr() {
        ExprPtr e = parseMul();
        while (true) {
            SourceLoc l = loc();
            if (at(TokKind::Reserved))
                unsupported("operator '" + cur().text + "'", l);
            if (accept(TokKind::Plus))
                e = mkBinOp(BinIntOp::Add, e, parseMul(), l);
            else if (accept(TokKind::Minus))
                e = mkBinOp(BinIntOp::Sub, e, parseMul(), l);
            else
                break;
        }
        return e;
    }

    // ---- booleans ----

    std::optional<CmpOp> cmpOpHere() {
        switch (cur().kind) {
        case TokKind::Le: return CmpOp::Le;
        case TokKind::Lt: return CmpOp::Lt;
        case TokKind::Ge: return CmpOp::Ge;
        case TokKind::Gt: return CmpOp::Gt;
        case TokKind::EqEq: return CmpOp::Eq;
        case TokKind::NotEq: return CmpOp::Ne;
        default: return std::nullopt;
        }
    }

    BoolPtr parseBoolPrimary() {
        SourceLoc at0 = loc();
        if (accept(TokKind::Not))
            return mkNot(parseBoolPrimary(), at0);
        // Try a comparison first; fall back to a parenthesized boolean.
        size_t save = pos;
        try {
            ExprPtr lhs = parseExpr();
            auto op = cmpOpHere();
            if (!op)
                throw Error(ErrKind::Parse, "expected comparison operator", loc());
            ++pos;
            ExprPtr rhs = parseExpr();
            return mkCmp(*op, lhs, rhs, at0);
        } catch (const Error& e) {
            if (e.kind != ErrKind::Parse)
                throw;
            pos = save;
        }
        if (accept(TokKind::LParen)) {
            BoolPtr b = parseBool();
            expect(TokKind::RParen, "')'");
            // Chained comparison of a parenthesized boolean is outside the grammar;
            // boolean values never feed arithmetic.
            return b;
        }
        throw Error(ErrKind::Parse, "expected boolean expression", at0);
    }

    BoolPtr parseBoolAnd() {
        BoolPtr b = parseBoolPrimary();
        while (at(TokKind::AndAnd)) {
            SourceLoc l = loc();
            ++pos;
            b = mkAnd(b, parseBoolPrimary(), l);
        }
        return b;
    }

    BoolPtr parseBool() {
        BoolPtr b = parseBoolAnd();
        while (at(TokKind::OrOr)) {
            SourceLoc l = loc();
            ++pos;
            b = mkOr(b, parseBoolAnd(), l);
        }
        return b;
    }

    // ---- statements ----

    StmtPtr parseBlock() {
        SourceLoc at0 = loc();
        expect(TokKind::LBrace, "'{'");
        std::vector<StmtPtr> ss;
        while (!at(TokKind::RBrace)) {
            if (at(TokKind::End))
                throw Error(ErrKind::Parse, "unterminated block", at0);
            ss.push_back(parseStmt());
        }
        expect(TokKind::RBrace, "'}'");
        return mkSeq(std::move(ss), at0);
    }

    // `x = e;` / `a[e] = e;` / `x++;` / call, without the trailing semicolon
    // (shared with the for-header clauses).
    StmtPtr parseSimpleStmt() {
        SourceLoc at0 = loc();
        std::string name = expect(TokKind::Ident, "identifier").text;
        if (accept(TokKind::PlusPlus))
            return mkVarAssign(name, mkBinOp(BinIntOp::Add, mkVar(name, at0), mkIntConst(1, at0), at0), at0);
        if (accept(TokKind::MinusMinus))
            return mkVarAssign(name, mkBinOp(BinIntOp::Sub, mkVar(name, at0), mkIntConst(1, at0), at0), at0);
        if (accept(TokKind::LBracket)) {
            ExprPtr idx = parseExpr();
            expect(TokKind::RBracket, "']'");
            expect(TokKind::Assign, "'='");
            return mkArrAssign(name, idx, parseExpr(), at0);
        }
        if (accept(TokKind::LParen)) {
            std::vector<ExprPtr> args;
            if (!at(TokKind::RParen)) {
                args.push_back(parseExpr());
                while (accept(TokKind::Comma))
                    args.push_back(parseExpr());
            }
            expect(TokKind::RParen, "')'");
            return mkCall(name, std::move(args), at0);
        }
        if (at(TokKind::Reserved))
            unsupported("operator '" + cur().text + "'", loc());
        expect(TokKind::Assign, "'='");
        return mkVarAssign(name, parseExpr(), at0);
    }

    StmtPtr parseStmt() {
        SourceLoc at0 = loc();
        if (at(TokKind::Annotation)) { // loop annotations from emitted files: skip
            ++pos;
            return parseStmt();
        }
        if (at(TokKind::LBrace))
            return parseBlock();
        if (accept(TokKind::KwIf)) {
            expect(TokKind::LParen, "'('");
            BoolPtr c = parseBool();
            expect(TokKind::RParen, "')'");
            StmtPtr thenS = parseStmt();
            StmtPtr elseS;
            if (accept(TokKind::KwElse))
                elseS = parseStmt();
            return mkIf(c, thenS, elseS, at0);
        }
        if (accept(TokKind::KwWhile)) {
            expect(TokKind::LParen, "'('");
            BoolPtr c = parseBool();
            expect(TokKind::RParen, "')'");
            int id = nextLoop++;
            return mkWhile(c, parseStmt(), id, at0);
        }
        if (accept(TokKind::KwFor)) {
            // for (init; cond; step) body  =>  { init; while (cond) { body; step; } }
            expect(TokKind::LParen, "'('");
            StmtPtr init;
            if (!at(TokKind::Semi)) {
                if (accept(TokKind::KwInt)) {
                    std::string x = expect(TokKind::Ident, "identifier").text;
                    expect(TokKind::Assign, "'='");
                    init = mkDecl(x, parseExpr(), at0);
                } else {
                    init = parseSimpleStmt();
                }
            }
            expect(TokKind::Semi, "';'");
            BoolPtr cond = parseBool();
            expect(TokKind::Semi, "';'");
            StmtPtr step;
            if (!at(TokKind::RParen))
                step = parseSimpleStmt();
            expect(TokKind::RParen, "')'");
            int id = nextLoop++;
            StmtPtr body = parseStmt();
            std::vector<StmtPtr> inner;
            inner.push_back(body);
            if (step)
                inner.push_back(step);
            StmtPtr loop = mkWhile(cond, mkSeq(std::move(inner), at0), id, at0);
            std::vector<StmtPtr> outer;
            if (init)
                outer.push_back(init);
            outer.push_back(loop);
            return mkSeq(std::move(outer), at0);
        }
        if (accept(TokKind::KwReturn)) {
            ExprPtr e;
            if (!at(TokKind::Semi))
                e = parseExpr();
            expect(TokKind::Semi, "';'");
            return mkReturn(e, at0);
        }
        if (accept(TokKind::KwBreak)) {
            expect(TokKind::Semi, "';'");
            return mkBreak(at0);
        }
        if (accept(TokKind::KwInt)) {
            std::string x = expect(TokKind::Ident, "identifier").text;
            ExprPtr init;
            if (accept(TokKind::Assign))
                init = parseExpr();
            expect(TokKind::Semi, "';'");
            return mkDecl(x, init, at0);
        }
        StmtPtr s = parseSimpleStmt();
        expect(TokKind::Semi, "';'");
        return s;
    }

    // ---- annotations & functions ----

    // Extracts `requires <bool>;` from an annotation body; other clauses
    // (ensures, assigns, loop ...) are tolerated and skipped.
    BoolPtr requiresOf(const Token& annot) {
        SourceFile tmp{"<annotation>", annot.text};
        std::vector<Token> sub = tokenize(tmp);
        Parser p(sub);
        BoolPtr pre;
        while (!p.at(TokKind::End)) {
            if (p.at(TokKind::Ident) && p.cur().text == "requires") {
                ++p.pos;
                BoolPtr b = p.parseBool();
                p.expect(TokKind::Semi, "';'");
                pre = pre ? mkAnd(pre, b, annot.loc) : b;
                continue;
            }
            // skip to the next ';' (or end)
            while (!p.at(TokKind::End) && !p.accept(TokKind::Semi))
                ++p.pos;
        }
        return pre;
    }

    FunctionDef parseFunction(BoolPtr pre) {
        FunctionDef fd;
        fd.loc = loc();
        fd.declaredPre = std::move(pre);
        if (accept(TokKind::KwInt))
            fd.returnsInt = true;
        else if (accept(TokKind::KwVoid))
            fd.returnsInt = false;
        else
            throw Error(ErrKind::Parse, "expected 'int' or 'void' return type", loc());
        fd.name = expect(TokKind::Ident, "function name").text;
        expect(TokKind::LParen, "'('");
        if (!at(TokKind::RParen)) {
            do {
                expect(TokKind::KwInt, "'int'");
                Param p;
                if (accept(TokKind::Star))
                    p.isArray = true;
                p.name = expect(TokKind::Ident, "parameter name").text;
                if (accept(TokKind::LBracket)) { // int a[] form
                    expect(TokKind::RBracket, "']'");
                    p.isArray = true;
                }
                fd.params.push_back(std::move(p));
            } while (accept(TokKind::Comma));
        }
        expect(TokKind::RParen, "')'");
        nextLoop = 0;
        fd.body = parseBlock();
        fd.loopCount = nextLoop;
        collectLocals(fd.body, fd.locals);
        return fd;
    }

    static void collectLocals(const StmtPtr& s, std::vector<std::string>& out) {
        if (!s)
            return;
        if (s->kind == AstStmt::Kind::Decl) {
            if (std::find(out.begin(), out.end(), s->name) == out.end())
                out.push_back(s->name);
        }
        collectLocals(s->thenS, out);
        collectLocals(s->elseS, out);
        collectLocals(s->body, out);
        for (const auto& k : s->seq)
            collectLocals(k, out);
    }

    Program parseProgram() {
        Program prog;
        while (!at(TokKind::End)) {
            BoolPtr pre;
            while (at(TokKind::Annotation)) {
                Token annot = cur();
                ++pos;
                if (BoolPtr r = requiresOf(annot))
                    pre = pre ? mkAnd(pre, r, annot.loc) : r;
            }
            if (at(TokKind::End))
                break;
            prog.functions.push_back(parseFunction(pre));
        }
        if (prog.functions.empty())
            throw Error(ErrKind::Parse, "no function definitions found");
        return prog;
    }
};

} // namespace

Program parse(const std::vector<Token>& tokens) {
    Parser p(tokens);
    return p.parseProgram();
}

Program parseSource(const SourceFile& src) { return parse(tokenize(src)); }

BoolPtr parseBoolExpr(const std::string& text) {
    SourceFile tmp{"<pre>", text};
    std::vector<Token> toks = tokenize(tmp);
    Parser p(toks);
    BoolPtr b = p.parseBool();
    p.expect(TokKind::End, "end of expression");
    return b;
}

// ---- printer ----

namespace {

void printExprTo(std::ostream& os, const ExprPtr& e, int parentPrec) {
    switch (e->kind) {
    case AstExpr::Kind::IntConst:
        if (e->value < 0)
            os << "(" << e->value << ")";
        else
            os << e->value;
        return;
    case AstExpr::Kind::Var: os << e->name; return;
    case AstExpr::Kind::ArrayAccess:
        os << e->name << "[";
        printExprTo(os, e->index, 0);
        os << "]";
        return;
    case AstExpr::Kind::BinOp: {
        int prec = e->op == BinIntOp::Mul ? 2 : 1;
        bool paren = prec < parentPrec;
        if (paren)
            os << "(";
        printExprTo(os, e->lhs, prec);
        os << (e->op == BinIntOp::Add ? " + " : e->op == BinIntOp::Sub ? " - " : " * ");
        // Right operand of - needs the tighter precedence to round-trip.
        printExprTo(os, e->rhs, e->op == BinIntOp::Mul ? 3 : 2);
        if (paren)
            os << ")";
        return;
    }
    }
}

void printBoolTo(std::ostream& os, const BoolPtr& b, int parentPrec);
void printBoolParen(std::ostream& os, const BoolPtr& b, int ctx);

const char* cmpText(CmpOp op) {
    switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ne: return "!=";
    case CmpOp::Eq: return "==";
    }
    return "?";
}

void printBoolTo(std::ostream& os, const BoolPtr& b, int parentPrec) {
    switch (b->kind) {
    case AstBool::Kind::Cmp:
        printExprTo(os, b->lhs, 0);
        os << " " << cmpText(b->cmp) << " ";
        printExprTo(os, b->rhs, 0);
        return;
    case AstBool::Kind::Not:
        os << "!(";
        printBoolTo(os, b->a, 0);
        os << ")";
        return;
    case AstBool::Kind::And: {
        bool paren = parentPrec > 2;
        if (paren) os << "(";
        // comparisons bind tighter than &&, which binds tighter than ||
        printBoolParen(os, b->a, 2);
        os << " && ";
        printBoolParen(os, b->b, 2);
        if (paren) os << ")";
        return;
    }
    case AstBool::Kind::Or: {
        bool paren = parentPrec > 1;
        if (paren) os << "(";
        printBoolParen(os, b->a, 1);
        os << " || ";
        printBoolParen(os, b->b, 1);
        if (paren) os << ")";
        return;
    }
    }
}

void printBoolParen(std::ostream& os, const BoolPtr& b, int ctx) {
    int prec = b->kind == AstBool::Kind::Or ? 1 : b->kind == AstBool::Kind::And ? 2 : 3;
    if (prec < ctx) {
        os << "(";
        printBoolTo(os, b, 0);
        os << ")";
    } else {
        printBoolTo(os, b, prec);
    }
}

void indentTo(std::ostream& os, int n) {
    for (int i = 0; i < n; ++i)
        os << "    ";
}

void printStmtTo(std::ostream& os, const StmtPtr& s, int depth) {
    switch (s->kind) {
    case AstStmt::Kind::Seq:
        for (const auto& k : s->seq)
            printStmtTo(os, k, depth);
        return;
    case AstStmt::Kind::Decl:
        indentTo(os, depth);
        os << "int " << s->name;
        if (s->expr) {
            os << " = ";
            printExprTo(os, s->expr, 0);
        }
        os << ";\n";
        return;
    case AstStmt::Kind::VarAssign:
        indentTo(os, depth);
        os << s->name << " = ";
        printExprTo(os, s->expr, 0);
        os << ";\n";
        return;
    case AstStmt::Kind::ArrAssign:
        indentTo(os, depth);
        os << s->name << "[";
        printExprTo(os, s->index, 0);
        os << "] = ";
        printExprTo(os, s->expr, 0);
        os << ";\n";
        return;
    case AstStmt::Kind::If:
        indentTo(os, depth);
        os << "if (";
        printBoolTo(os, s->cond, 0);
        os << ") {\n";
        printStmtTo(os, s->thenS, depth + 1);
        indentTo(os, depth);
        os << "}";
        if (s->elseS) {
            os << " else {\n";
            printStmtTo(os, s->elseS, depth + 1);
            indentTo(os, depth);
            os << "}";
        }
        os << "\n";
        return;
    case AstStmt::Kind::While:
        indentTo(os, depth);
        os << "while (";
        printBoolTo(os, s->cond, 0);
        os << ") {\n";
        printStmtTo(os, s->body, depth + 1);
        indentTo(os, depth);
        os << "}\n";
        return;
    case AstStmt::Kind::Return:
        indentTo(os, depth);
        os << "return";
        if (s->expr) {
            os << " ";
            printExprTo(os, s->expr, 0);
        }
        os << ";\n";
        return;
    case AstStmt::Kind::Call: {
        indentTo(os, depth);
        os << s->name << "(";
        for (size_t i = 0; i < s->args.size(); ++i) {
            if (i)
                os << ", ";
            printExprTo(os, s->args[i], 0);
        }
        os << ");\n";
        return;
    }
    case AstStmt::Kind::Break:
        indentTo(os, depth);
        os << "break;\n";
        return;
    }
}

} // namespace

std::string printExpr(const ExprPtr& e) {
    std::ostringstream os;
    printExprTo(os, e, 0);
    return os.str();
}

std::string printBool(const BoolPtr& b) {
    std::ostringstream os;
    printBoolTo(os, b, 0);
    return os.str();
}

std::string printFunction(const FunctionDef& fd) {
    std::ostringstream os;
    if (fd.declaredPre)
        os << "/*@ requires " << printBool(fd.declaredPre) << "; */\n";
    os << (fd.returnsInt ? "int " : "void ") << fd.name << "(";
    for (size_t i = 0; i < fd.params.size(); ++i) {
        if (i)
            os << ", ";
        os << "int " << (fd.params[i].isArray ? "*" : "") << fd.params[i].name;
    }
    os << ") {\n";
    printStmtTo(os, fd.body, 1);
    os << "}\n";
    return os.str();
}

std::string printProgram(const Program& prog) {
    std::string out;
    for (size_t i = 0; i < prog.functions.size(); ++i) {
        if (i)
            out += "\n";
        out += printFunction(prog.functions[i]);
    }
    return out;
}

static void collectAssigned(const StmtPtr& s, std::vector<std::string>& out) {
    if (!s)
        return;
    if ((s->kind == AstStmt::Kind::VarAssign || (s->kind == AstStmt::Kind::Decl && s->expr)) &&
        std::find(out.begin(), out.end(), s->name) == out.end())
        out.push_back(s->name);
    collectAssigned(s->thenS, out);
    collectAssigned(s->elseS, out);
    collectAssigned(s->body, out);
    for (const auto& k : s->seq)
        collectAssigned(k, out);
}

std::vector<std::string> assignedVars(const FunctionDef& fd) {
    std::vector<std::string> out;
    collectAssigned(fd.body, out);
    return out;
}

} // namespace arcs
