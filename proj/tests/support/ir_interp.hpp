// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Small concrete interpreter for the lowered IR, independent of the symbolic
// executor. Used to check that lowering preserves semantics against the AST
// interpreter in the oracle module.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcs/ir.hpp"
#include "arcs/oracle.hpp"

namespace arcs::test {

struct IrRunResult {
    enum class Status { Ok, OutOfBounds, NonTermination };
    Status status = Status::Ok;
    std::map<std::string, long long> ints;
    std::map<std::string, std::vector<long long>> arrays;
    std::optional<long long> result;
};

class IrInterp {
  private:
    struct Oob {};
    struct Fuel {};
    struct Broke {};
    struct Returned {};

    std::map<std::string, long long> ints_;
    std::map<std::string, std::vector<long long>> arrays_;
    std::map<std::string, std::pair<std::string, long long>> addrs_; // addrvar -> (array, idx)
    long long fuel_ = 0;

    void burn() {
        if (--fuel_ < 0)
            throw Fuel{};
    }

    long long eval(const IrExprPtr& e) {
        burn();
        switch (e->kind) {
        case IrExpr::Kind::Const: return e->value;
        case IrExpr::Kind::IntVar: return ints_.at(e->name);
        case IrExpr::Kind::AddrVar: throw Oob{};
        case IrExpr::Kind::BinOp: {
            long long l = eval(e->lhs), r = eval(e->rhs);
            switch (e->op) {
            case BinIntOp::Add: return l + r;
            case BinIntOp::Sub: return l - r;
            case BinIntOp::Mul: return l * r;
            }
            return l;
        }
        case IrExpr::Kind::Read: {
            const auto& [arr, idx] = addrs_.at(e->name);
            auto it = arrays_.find(arr);
            if (it == arrays_.end() || idx < 0 ||
                idx >= static_cast<long long>(it->second.size()))
                throw Oob{};
            return it->second[static_cast<size_t>(idx)];
        }
        }
        throw Oob{};
    }

    bool evalBool(const IrBoolPtr& b) {
        burn();
        switch (b->kind) {
        case IrBool::Kind::Cmp: {
            long long l = eval(b->lhs), r = eval(b->rhs);
            switch (b->cmp) {
            case CmpOp::Le: return l <= r;
            case CmpOp::Lt: return l < r;
            case CmpOp::Ge: return l >= r;
            case CmpOp::Gt: return l > r;
            case CmpOp::Ne: return l != r;
            case CmpOp::Eq: return l == r;
            }
            return false;
        }
        case IrBool::Kind::Not: return !evalBool(b->a);
        case IrBool::Kind::And: return evalBool(b->a) && evalBool(b->b);
        case IrBool::Kind::Or: return evalBool(b->a) || evalBool(b->b);
        }
        return false;
    }

    void exec(const IrStmtPtr& s, std::optional<long long>& result) {
        if (!s)
            return;
        burn();
        switch (s->kind) {
        case IrStmt::Kind::Seq:
            for (const auto& k : s->seq)
                exec(k, result);
            return;
        case IrStmt::Kind::Assign: ints_[s->name] = eval(s->expr); return;
        case IrStmt::Kind::AddrElem: addrs_[s->name] = {s->arrayName, eval(s->index)}; return;
        case IrStmt::Kind::Write: {
            long long v = eval(s->expr);
            const auto& [arr, idx] = addrs_.at(s->name);
            auto it = arrays_.find(arr);
            if (it == arrays_.end() || idx < 0 ||
                idx >= static_cast<long long>(it->second.size()))
                throw Oob{};
            it->second[static_cast<size_t>(idx)] = v;
            return;
        }
        case IrStmt::Kind::If:
            if (evalBool(s->cond))
                exec(s->thenS, result);
            else
                exec(s->elseS, result);
            return;
        case IrStmt::Kind::While:
            try {
                while (evalBool(s->cond))
                    exec(s->body, result);
            } catch (const Broke&) {
            }
            return;
        case IrStmt::Kind::Break: throw Broke{};
        case IrStmt::Kind::Return:
            if (s->expr)
                result = eval(s->expr);
            throw Returned{};
        }
    }

  public:
    // wrapper handling top-level Returned
    IrRunResult runFull(const LoweredFunction& lf, const ConcreteState& input,
                        long long fuel = 100000) {
        arrays_ = input.arrays;
        ints_.clear();
        addrs_.clear();
        for (const auto& [k, v] : input.ints)
            ints_[k] = v;
        fuel_ = fuel;
        IrRunResult out;
        try {
            exec(lf.root, out.result);
        } catch (const Returned&) {
        } catch (const Oob&) {
            out.status = IrRunResult::Status::OutOfBounds;
        } catch (const Fuel&) {
            out.status = IrRunResult::Status::NonTermination;
        }
        out.ints = ints_;
        out.arrays = arrays_;
        return out;
    }
};

} // namespace arcs::test
