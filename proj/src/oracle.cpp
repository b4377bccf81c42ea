// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/oracle.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace arcs {

std::string ConcreteState::describe() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : ints) {
        os << (first ? "" : ", ") << k << "=" << v;
        first = false;
    }
    for (const auto& [k, vs] : arrays) {
        os << (first ? "" : ", ") << k << "=[";
        for (size_t i = 0; i < vs.size(); ++i)
            os << (i ? "," : "") << vs[i];
        os << "]";
        first = false;
    }
    return os.str();
}

namespace {

struct OobSignal {
    std::string array;
    long long index;
};

struct FuelSignal {};

struct Interp {
    const Program& prog;
    std::map<std::string, std::vector<long long>>& arrays; // top-level storage
    long long fuel;
    std::vector<TraceEvent>* trace;
    const std::map<std::string, long long>* topInts = nullptr; // for snapshots

    void burn() {
        if (--fuel < 0)
            throw FuelSignal{};
    }

    ConcreteState snapshot(const std::map<std::string, long long>& ints) const {
        ConcreteState s;
        s.ints = ints;
        s.arrays = arrays;
        return s;
    }

    long long evalExpr(const ExprPtr& e, std::map<std::string, long long>& ints,
                       const std::map<std::string, std::string>& alias) {
        burn();
        switch (e->kind) {
        case AstExpr::Kind::IntConst: return e->value;
        case AstExpr::Kind::Var: {
            auto it = ints.find(e->name);
            if (it == ints.end())
                throw Error(ErrKind::UnboundVariable, "read of unassigned '" + e->name + "'");
            return it->second;
        }
        case AstExpr::Kind::BinOp: {
            long long l = evalExpr(e->lhs, ints, alias);
            long long r = evalExpr(e->rhs, ints, alias);
            switch (e->op) {
            case BinIntOp::Add: return l + r;
            case BinIntOp::Sub: return l - r;
            case BinIntOp::Mul: return l * r;
            }
            return l;
        }
        case AstExpr::Kind::ArrayAccess: {
            auto target = alias.find(e->name);
            const std::string& key = target == alias.end() ? e->name : target->second;
            long long idx = evalExpr(e->index, ints, alias);
            auto it = arrays.find(key);
            if (it == arrays.end() || idx < 0 || idx >= static_cast<long long>(it->second.size()))
                throw OobSignal{key, idx};
            return it->second[static_cast<size_t>(idx)];
        }
        }
        throw Error(ErrKind::Internal, "unreachable");
    }

    bool evalBool(const BoolPtr& b, std::map<std::string, long long>& ints,
                  const std::map<std::string, std::string>& alias) {
        burn();
        switch (b->kind) {
        case AstBool::Kind::Cmp: {
            long long l = evalExpr(b->lhs, ints, alias);
            long long r = evalExpr(b->rhs, ints, alias);
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
        case AstBool::Kind::Not: return !evalBool(b->a, ints, alias);
        case AstBool::Kind::And: return evalBool(b->a, ints, alias) && evalBool(b->b, ints, alias);
        case AstBool::Kind::Or: return evalBool(b->a, ints, alias) || evalBool(b->b, ints, alias);
        }
        return false;
    }

    enum class Flow { Normal, Broke, Returned };

    Flow execStmt(const StmtPtr& s, std::map<std::string, long long>& ints,
                  const std::map<std::string, std::string>& alias,
                  std::optional<long long>& result, bool topLevel) {
        burn();
        switch (s->kind) {
        case AstStmt::Kind::Seq:
            for (const auto& k : s->seq) {
                Flow f = execStmt(k, ints, alias, result, topLevel);
                if (f != Flow::Normal)
                    return f;
            }
            return Flow::Normal;
        case AstStmt::Kind::Decl:
            if (s->expr)
                ints[s->name] = evalExpr(s->expr, ints, alias);
            return Flow::Normal;
        case AstStmt::Kind::VarAssign:
            ints[s->name] = evalExpr(s->expr, ints, alias);
            return Flow::Normal;
        case AstStmt::Kind::ArrAssign: {
            long long idx = evalExpr(s->index, ints, alias);
            long long val = evalExpr(s->expr, ints, alias);
            auto target = alias.find(s->name);
            const std::string& key = target == alias.end() ? s->name : target->second;
            auto it = arrays.find(key);
            if (it == arrays.end() || idx < 0 || idx >= static_cast<long long>(it->second.size()))
                throw OobSignal{key, idx};
            it->second[static_cast<size_t>(idx)] = val;
            return Flow::Normal;
        }
        case AstStmt::Kind::If:
            if (evalBool(s->cond, ints, alias))
                return execStmt(s->thenS, ints, alias, result, topLevel);
            if (s->elseS)
                return execStmt(s->elseS, ints, alias, result, topLevel);
            return Flow::Normal;
        case AstStmt::Kind::While: {
            long long iter = 0;
            while (true) {
                if (trace && topLevel)
                    trace->push_back(TraceEvent{s->loopId, s->loc.line, iter, snapshot(ints)});
                if (!evalBool(s->cond, ints, alias))
                    return Flow::Normal;
                Flow f = execStmt(s->body, ints, alias, result, topLevel);
                if (f == Flow::Broke)
                    return Flow::Normal;
                if (f == Flow::Returned)
                    return f;
                ++iter;
            }
        }
        case AstStmt::Kind::Return:
            if (s->expr)
                result = evalExpr(s->expr, ints, alias);
            return Flow::Returned;
        case AstStmt::Kind::Break: return Flow::Broke;
        case AstStmt::Kind::Call: {
            const FunctionDef* callee = prog.find(s->name);
            if (!callee)
                throw Error(ErrKind::Internal, "call to unknown function");
            std::map<std::string, long long> calleeInts;
            std::map<std::string, std::string> calleeAlias;
            for (size_t i = 0; i < callee->params.size(); ++i) {
                const Param& p = callee->params[i];
                if (p.isArray) {
                    const std::string& actual = s->args[i]->name;
                    auto a = alias.find(actual);
                    calleeAlias[p.name] = a == alias.end() ? actual : a->second;
                } else {
                    calleeInts[p.name] = evalExpr(s->args[i], ints, alias);
                }
            }
            std::optional<long long> ignored;
            execStmt(callee->body, calleeInts, calleeAlias, ignored, false);
            return Flow::Normal;
        }
        }
        throw Error(ErrKind::Internal, "unreachable");
    }
};

} // namespace

InterpResult interpret(const Program& prog, const FunctionDef& fd, const ConcreteState& input,
                       long long fuel) {
    InterpResult out;
    std::map<std::string, std::vector<long long>> arrays = input.arrays;
    std::map<std::string, long long> ints;
    for (const auto& p : fd.params) {
        if (p.isArray) {
            if (!arrays.count(p.name))
                arrays[p.name] = {};
        } else {
            auto it = input.ints.find(p.name);
            ints[p.name] = it == input.ints.end() ? 0 : it->second;
        }
    }

    Interp in{prog, arrays, fuel, &out.trace};
    std::optional<long long> result;
    try {
        in.execStmt(fd.body, ints, {}, result, true);
        out.status = InterpResult::Status::Ok;
    } catch (const OobSignal& o) {
        out.status = InterpResult::Status::OutOfBounds;
        out.detail = o.array + "[" + std::to_string(o.index) + "]";
    } catch (const FuelSignal&) {
        out.status = InterpResult::Status::NonTermination;
        out.detail = "fuel exhausted";
    }
    out.result = result;
    out.final.ints = std::move(ints);
    out.final.arrays = std::move(arrays);
    return out;
}

GenSpec GenSpec::forFunction(const FunctionDef& fd) {
    GenSpec s;
    int arrays = 0;
    for (const auto& p : fd.params)
        arrays += p.isArray ? 1 : 0;
    if (arrays >= 3) {
        s.valLo = 0;
        s.valHi = 1;
        s.lenMax = 3;
    } else if (arrays == 2) {
        s.valLo = -1;
        s.valHi = 1;
    }
    return s;
}

namespace {

bool evalPre(const BoolPtr& pre, const ConcreteState& st) {
    if (!pre)
        return true;
    std::function<long long(const ExprPtr&)> evalE = [&](const ExprPtr& e) -> long long {
        switch (e->kind) {
        case AstExpr::Kind::IntConst: return e->value;
        case AstExpr::Kind::Var: {
            auto it = st.ints.find(e->name);
            if (it != st.ints.end())
                return it->second;
            if (e->name.rfind("len_", 0) == 0) {
                auto a = st.arrays.find(e->name.substr(4));
                if (a != st.arrays.end())
                    return static_cast<long long>(a->second.size());
            }
            throw OobSignal{e->name, 0};
        }
        case AstExpr::Kind::BinOp: {
            long long l = evalE(e->lhs), r = evalE(e->rhs);
            switch (e->op) {
            case BinIntOp::Add: return l + r;
            case BinIntOp::Sub: return l - r;
            case BinIntOp::Mul: return l * r;
            }
            return l;
        }
        case AstExpr::Kind::ArrayAccess: {
            auto a = st.arrays.find(e->name);
            long long idx = evalE(e->index);
            if (a == st.arrays.end() || idx < 0 ||
                idx >= static_cast<long long>(a->second.size()))
                throw OobSignal{e->name, idx};
            return a->second[static_cast<size_t>(idx)];
        }
        }
        return 0;
    };
    std::function<bool(const BoolPtr&)> evalB = [&](const BoolPtr& b) -> bool {
        switch (b->kind) {
        case AstBool::Kind::Cmp: {
            long long l = evalE(b->lhs), r = evalE(b->rhs);
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
        case AstBool::Kind::Not: return !evalB(b->a);
        case AstBool::Kind::And: return evalB(b->a) && evalB(b->b);
        case AstBool::Kind::Or: return evalB(b->a) || evalB(b->b);
        }
        return false;
    };
    try {
        return evalB(pre);
    } catch (const OobSignal&) {
        return false;
    }
}

} // namespace

std::vector<ConcreteState> genInputs(const FunctionDef& fd, const BoolPtr& pre,
                                     const GenSpec& spec) {
    std::vector<std::string> arrayParams, scalarParams;
    for (const auto& p : fd.params)
        (p.isArray ? arrayParams : scalarParams).push_back(p.name);
    std::vector<std::string> freeScalars;
    for (const auto& s : scalarParams)
        if (!spec.lenLinks.count(s))
            freeScalars.push_back(s);

    long long nVals = spec.valHi - spec.valLo + 1;
    long long nScal = spec.scalarHi - spec.scalarLo + 1;
    const int lenMax = arrayParams.empty() ? 0 : spec.lenMax;

    // exhaustive domain size
    long double estimate = 0;
    for (int L = 0; L <= lenMax; ++L) {
        long double cells = 1;
        for (size_t a = 0; a < arrayParams.size(); ++a)
            for (int i = 0; i < L; ++i)
                cells *= static_cast<long double>(nVals);
        long double scal = 1;
        for (size_t i = 0; i < freeScalars.size(); ++i)
            scal *= static_cast<long double>(nScal);
        estimate += cells * scal;
    }

    std::vector<ConcreteState> out;
    auto tryYield = [&](ConcreteState st) {
        for (const auto& [scalar, array] : spec.lenLinks) {
            auto a = st.arrays.find(array);
            st.ints[scalar] = a == st.arrays.end() ? 0 : static_cast<long long>(a->second.size());
        }
        if (evalPre(pre, st))
            out.push_back(std::move(st));
    };

    if (estimate <= static_cast<long double>(spec.maxExhaustive)) {
        for (int L = 0; L <= lenMax; ++L) {
            size_t nCells = arrayParams.size() * static_cast<size_t>(L);
            std::vector<long long> cells(nCells, spec.valLo);
            bool cellsDone = false;
            while (!cellsDone) {
                std::vector<long long> scalars(freeScalars.size(), spec.scalarLo);
                bool scalDone = false;
                while (!scalDone) {
                    ConcreteState st;
                    size_t c = 0;
                    for (const auto& ar : arrayParams) {
                        std::vector<long long> v(static_cast<size_t>(L));
                        for (int i = 0; i < L; ++i)
                            v[static_cast<size_t>(i)] = cells[c++];
                        st.arrays[ar] = std::move(v);
                    }
                    for (size_t i = 0; i < freeScalars.size(); ++i)
                        st.ints[freeScalars[i]] = scalars[i];
                    tryYield(std::move(st));
                    // advance scalars
                    scalDone = true;
                    for (size_t i = 0; i < scalars.size(); ++i) {
                        if (scalars[i] < spec.scalarHi) {
                            ++scalars[i];
                            std::fill(scalars.begin(), scalars.begin() + static_cast<long>(i),
                                      spec.scalarLo);
                            scalDone = false;
                            break;
                        }
                    }
                }
                cellsDone = true;
                for (size_t i = 0; i < cells.size(); ++i) {
                    if (cells[i] < spec.valHi) {
                        ++cells[i];
                        std::fill(cells.begin(), cells.begin() + static_cast<long>(i), spec.valLo);
                        cellsDone = false;
                        break;
                    }
                }
                if (nCells == 0)
                    break;
            }
        }
    } else {
        std::mt19937 rng(spec.seed);
        std::uniform_int_distribution<int> lenD(0, lenMax);
        std::uniform_int_distribution<long long> valD(spec.valLo, spec.valHi);
        std::uniform_int_distribution<long long> scalD(spec.scalarLo, spec.scalarHi);
        int attempts = spec.samples * 20;
        while (static_cast<int>(out.size()) < spec.samples && attempts-- > 0) {
            int L = lenD(rng);
            ConcreteState st;
            for (const auto& ar : arrayParams) {
                std::vector<long long> v(static_cast<size_t>(L));
                for (auto& x : v)
                    x = valD(rng);
                st.arrays[ar] = std::move(v);
            }
            for (const auto& s : freeScalars)
                st.ints[s] = scalD(rng);
            tryYield(std::move(st));
        }
    }

    if (out.empty())
        throw Error(ErrKind::PreUnsat, "no input satisfies the precondition");
    return out;
}

// ---- formula evaluation ----

namespace {

std::optional<long long> evalAtom(const SrcAtom& a, EvalEnv& env) {
    switch (a.kind) {
    case SrcAtom::Kind::Var: {
        auto b = env.bound.find(a.name);
        if (b != env.bound.end())
            return b->second;
        auto it = env.current->ints.find(a.name);
        if (it == env.current->ints.end())
            return std::nullopt;
        return it->second;
    }
    case SrcAtom::Kind::OldVar: {
        auto it = env.entry->ints.find(a.name);
        if (it == env.entry->ints.end())
            return std::nullopt;
        return it->second;
    }
    case SrcAtom::Kind::Result: return env.result;
    case SrcAtom::Kind::Cell:
    case SrcAtom::Kind::OldCell: {
        const ConcreteState* st = a.kind == SrcAtom::Kind::Cell ? env.current : env.entry;
        auto it = st->arrays.find(a.name);
        if (it == st->arrays.end())
            return std::nullopt;
        auto idx = evalLin(a.args[0], env);
        if (!idx || *idx < 0 || *idx >= static_cast<long long>(it->second.size()))
            return std::nullopt;
        return it->second[static_cast<size_t>(*idx)];
    }
    case SrcAtom::Kind::Len: {
        auto it = env.entry->arrays.find(a.name);
        if (it == env.entry->arrays.end())
            return std::nullopt;
        return static_cast<long long>(it->second.size());
    }
    case SrcAtom::Kind::Bound: {
        auto b = env.bound.find(a.name);
        if (b == env.bound.end())
            return std::nullopt;
        return b->second;
    }
    case SrcAtom::Kind::Prod: {
        long long prod = 1;
        for (const auto& f : a.args) {
            auto v = evalLin(f, env);
            if (!v)
                return std::nullopt;
            prod *= *v;
        }
        return prod;
    }
    }
    return std::nullopt;
}

} // namespace

std::optional<long long> evalLin(const SrcLin& lin, EvalEnv& env) {
    long long sum = lin.k;
    for (const auto& [coeff, atom] : lin.parts) {
        auto v = evalAtom(atom, env);
        if (!v)
            return std::nullopt;
        sum += coeff * *v;
    }
    return sum;
}

namespace {

Truth cmpTruth(CmpOp op, long long l, long long r) {
    bool v = false;
    switch (op) {
    case CmpOp::Le: v = l <= r; break;
    case CmpOp::Lt: v = l < r; break;
    case CmpOp::Ge: v = l >= r; break;
    case CmpOp::Gt: v = l > r; break;
    case CmpOp::Ne: v = l != r; break;
    case CmpOp::Eq: v = l == r; break;
    }
    return v ? Truth::True : Truth::False;
}

} // namespace

Truth evalFormula(const SrcFormula& f, EvalEnv& env) {
    switch (f.kind) {
    case SrcFormula::Kind::True: return Truth::True;
    case SrcFormula::Kind::False: return Truth::False;
    case SrcFormula::Kind::Cmp: {
        auto l = evalLin(f.lhs, env);
        auto r = evalLin(f.rhs, env);
        if (!l || !r)
            return Truth::Undef;
        return cmpTruth(f.rel, *l, *r);
    }
    case SrcFormula::Kind::Chain: {
        auto l = evalLin(f.lhs, env);
        auto m = evalLin(f.chainMid, env);
        auto r = evalLin(f.rhs, env);
        if (!l || !m || !r)
            return Truth::Undef;
        return (*l <= *m && *m <= *r) ? Truth::True : Truth::False;
    }
    case SrcFormula::Kind::And: {
        bool undef = false;
        for (const auto& k : f.kids) {
            Truth t = evalFormula(k, env);
            if (t == Truth::False)
                return Truth::False;
            undef = undef || t == Truth::Undef;
        }
        return undef ? Truth::Undef : Truth::True;
    }
    case SrcFormula::Kind::Or: {
        bool undef = false;
        for (const auto& k : f.kids) {
            Truth t = evalFormula(k, env);
            if (t == Truth::True)
                return Truth::True;
            undef = undef || t == Truth::Undef;
        }
        return undef ? Truth::Undef : Truth::False;
    }
    case SrcFormula::Kind::Forall:
    case SrcFormula::Kind::Exists: {
        long long lo, hi;
        if (f.lo && f.hi) {
            auto l = evalLin(*f.lo, env);
            auto h = evalLin(*f.hi, env);
            if (!l || !h)
                return Truth::Undef;
            lo = *l;
            hi = *h;
        } else {
            // no recorded range: sweep a window wide enough for every value
            // the small-domain oracle can produce
            long long maxLen = 0;
            for (const auto& [name, v] : env.entry->arrays)
                maxLen = std::max(maxLen, static_cast<long long>(v.size()));
            lo = -17;
            hi = maxLen + 17;
        }
        bool undef = false;
        bool forall = f.kind == SrcFormula::Kind::Forall;
        for (long long k = lo; k < hi; ++k) {
            auto saved = env.bound.find(f.boundVar);
            long long savedVal = saved == env.bound.end() ? 0 : saved->second;
            bool had = saved != env.bound.end();
            env.bound[f.boundVar] = k;
            Truth t = evalFormula(f.kids[0], env);
            if (had)
                env.bound[f.boundVar] = savedVal;
            else
                env.bound.erase(f.boundVar);
            if (forall && t == Truth::False)
                return Truth::False;
            if (!forall && t == Truth::True)
                return Truth::True;
            undef = undef || t == Truth::Undef;
        }
        if (undef)
            return Truth::Undef;
        return forall ? Truth::True : Truth::False;
    }
    }
    return Truth::Undef;
}

ValidationReport validateContract(const Program& prog, const FunctionDef& fd,
                                  const Contract& contract,
                                  const std::vector<ConcreteState>& inputs, long long fuel) {
    ValidationReport report;
    constexpr size_t kMaxFailures = 25;
    long long oobSkipped = 0, nontermSkipped = 0, undefWarn = 0;

    for (const ConcreteState& input : inputs) {
        InterpResult run = interpret(prog, fd, input, fuel);
        if (run.status == InterpResult::Status::OutOfBounds) {
            ++oobSkipped;
            continue;
        }
        if (run.status == InterpResult::Status::NonTermination) {
            ++nontermSkipped;
            continue;
        }
        ++report.inputsTested;
        if (report.failures.size() >= kMaxFailures)
            continue;

        EvalEnv env;
        env.entry = &input;
        env.current = &run.final;
        env.result = run.result;

        // (a) some postcondition disjunct holds at the final state
        bool anyTrue = contract.postDisjuncts.empty();
        bool anyUndef = false;
        for (const auto& d : contract.postDisjuncts) {
            Truth t = evalFormula(d, env);
            if (t == Truth::True) {
                anyTrue = true;
                break;
            }
            anyUndef = anyUndef || t == Truth::Undef;
        }
        if (!anyTrue) {
            report.failures.push_back(
                {input, "post", anyUndef ? "no disjunct holds (some undefined)"
                                         : "no disjunct holds"});
        }

        // (b) changed cells are contained in the concretized assigns ranges
        for (const auto& [name, final] : run.final.arrays) {
            auto entryIt = input.arrays.find(name);
            if (entryIt == input.arrays.end())
                continue;
            for (size_t i = 0; i < final.size(); ++i) {
                if (final[i] == entryIt->second[i])
                    continue;
                bool covered = false;
                EvalEnv preEnv;
                preEnv.entry = &input;
                preEnv.current = &input;
                for (const auto& r : contract.assigns) {
                    if (r.array != name)
                        continue;
                    auto lo = evalLin(r.start, preEnv);
                    auto hi = evalLin(r.endExcl, preEnv);
                    if (lo && hi && *lo <= static_cast<long long>(i) &&
                        static_cast<long long>(i) < *hi) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) {
                    report.failures.push_back(
                        {input, "assigns",
                         name + "[" + std::to_string(i) + "] changed outside assigns"});
                    break;
                }
            }
        }

        // (c) loop invariants at every loop-head visit
        for (const TraceEvent& ev : run.trace) {
            const LoopAnnotation* ann = nullptr;
            for (const auto& a : contract.loops)
                if (a.loc.line == ev.srcLine)
                    ann = &a;
            if (!ann)
                continue;
            EvalEnv lenv;
            lenv.entry = &input;
            lenv.current = &ev.snapshot;
            for (const auto& item : ann->items) {
                if (item.kind == InvariantClause::Kind::LoopAssigns)
                    continue;
                Truth t = evalFormula(item.formula, lenv);
                if (t != Truth::True) {
                    ++undefWarn;
                    report.failures.push_back(
                        {input, "invariant",
                         "loop " + std::to_string(ann->loopId) + " iteration " +
                             std::to_string(ev.iteration) +
                             (t == Truth::Undef ? " (undefined)" : " violated")});
                    break;
                }
            }
            if (report.failures.size() >= kMaxFailures)
                break;
        }
    }

    if (oobSkipped)
        report.warnings.push_back(std::to_string(oobSkipped) +
                                  " runs excluded: out-of-bounds access");
    if (nontermSkipped)
        report.warnings.push_back(std::to_string(nontermSkipped) + " runs excluded: fuel exhausted");
    return report;
}

} // namespace arcs
