// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/compare.hpp"

#include <algorithm>
#include <numeric>

namespace arcs {

namespace {

// One inequality: sum(coeff * atom) + k >= 0.
struct LinRow {
    std::map<AtomPtr, long long, AtomLess> c;
    long long k = 0;
};

constexpr size_t kMaxRows = 400;
constexpr size_t kMaxVars = 18;
constexpr long long kCoeffCap = 1LL << 40;

bool mulOverflow(long long a, long long b, long long& out) {
    return __builtin_mul_overflow(a, b, &out);
}

bool addOverflow(long long a, long long b, long long& out) {
    return __builtin_add_overflow(a, b, &out);
}

long long floorDiv(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

// gcd-normalize; integer tightening floors the constant.
void tighten(LinRow& r) {
    long long g = 0;
    for (auto& [a, c] : r.c)
        g = std::gcd(g, std::llabs(c));
    if (g <= 1)
        return;
    for (auto& [a, c] : r.c)
        c /= g;
    r.k = floorDiv(r.k, g);
}

bool rowOf(const SymExpr& e, LinRow& out) {
    out.c.clear();
    out.k = e.k;
    for (const auto& [coeff, atom] : e.terms)
        out.c[atom] += coeff;
    for (auto it = out.c.begin(); it != out.c.end();)
        it = it->second == 0 ? out.c.erase(it) : std::next(it);
    return true;
}

void addGe0(std::vector<LinRow>& rows, const SymExpr& e) {
    LinRow r;
    rowOf(e, r);
    tighten(r);
    rows.push_back(std::move(r));
}

// Collects the affine conjuncts; Ne atoms and quantified constraints are
// ignored (sound: fewer constraints can only make refutation harder).
void collectRows(const std::vector<PcElem>& elems, std::vector<LinRow>& rows,
                 std::vector<SymExpr>* neqs) {
    for (const auto& el : elems) {
        if (const auto* a = std::get_if<BoolAtom>(&el.v)) {
            switch (a->rel) {
            case Rel::Ge0: addGe0(rows, a->e); break;
            case Rel::Eq0:
                addGe0(rows, a->e);
                addGe0(rows, neg(a->e));
                break;
            case Rel::Ne0:
                if (neqs)
                    neqs->push_back(a->e);
                break;
            }
        }
    }
}

bool rowContradiction(const LinRow& r) { return r.c.empty() && r.k < 0; }

// Fourier-Motzkin refutation. Returns true only when the system is
// rationally (hence integrally) infeasible; bails out to false on caps.
bool refute(std::vector<LinRow> rows) {
    for (const auto& r : rows)
        if (rowContradiction(r))
            return true;

    std::set<AtomPtr, AtomLess> vars;
    for (const auto& r : rows)
        for (const auto& [a, c] : r.c)
            vars.insert(a);
    if (vars.size() > kMaxVars)
        return false;

    while (!vars.empty()) {
        // cheapest variable first: fewest pos*neg combinations
        AtomPtr best;
        size_t bestCost = SIZE_MAX;
        for (const auto& v : vars) {
            size_t pos = 0, negn = 0;
            for (const auto& r : rows) {
                auto it = r.c.find(v);
                if (it == r.c.end())
                    continue;
                (it->second > 0 ? pos : negn)++;
            }
            size_t cost = pos * negn;
            if (cost < bestCost) {
                bestCost = cost;
                best = v;
            }
        }

        std::vector<LinRow> keep, pos, negs;
        for (auto& r : rows) {
            auto it = r.c.find(best);
            if (it == r.c.end())
                keep.push_back(std::move(r));
            else if (it->second > 0)
                pos.push_back(std::move(r));
            else
                negs.push_back(std::move(r));
        }
        for (const auto& p : pos) {
            for (const auto& n : negs) {
                long long a = p.c.at(best);        // > 0
                long long b = -n.c.at(best);       // > 0
                long long g = std::gcd(a, b);
                long long mp = b / g, mn = a / g;  // combine mp*p + mn*n
                LinRow r;
                bool overflow = false;
                auto accum = [&](const LinRow& src, long long m) {
                    for (const auto& [atom, c] : src.c) {
                        long long t;
                        if (mulOverflow(c, m, t) || addOverflow(r.c[atom], t, r.c[atom]))
                            overflow = true;
                    }
                    long long t;
                    if (mulOverflow(src.k, m, t) || addOverflow(r.k, t, r.k))
                        overflow = true;
                };
                accum(p, mp);
                accum(n, mn);
                if (overflow)
                    return false;
                for (auto it = r.c.begin(); it != r.c.end();)
                    it = it->second == 0 ? r.c.erase(it) : std::next(it);
                for (const auto& [atom, c] : r.c)
                    if (std::llabs(c) > kCoeffCap)
                        return false;
                tighten(r);
                if (rowContradiction(r))
                    return true;
                if (!r.c.empty())
                    keep.push_back(std::move(r));
            }
        }
        if (keep.size() > kMaxRows)
            return false;
        rows = std::move(keep);
        vars.erase(best);
    }
    for (const auto& r : rows)
        if (rowContradiction(r))
            return true;
    return false;
}

bool refuteWith(const PathCond& pc, const BoolAtom& extra) {
    std::vector<LinRow> rows;
    collectRows(pc.elems, rows, nullptr);
    switch (extra.rel) {
    case Rel::Ge0: addGe0(rows, extra.e); break;
    case Rel::Eq0:
        addGe0(rows, extra.e);
        addGe0(rows, neg(extra.e));
        break;
    case Rel::Ne0:
        return false; // a disequality never helps a linear refutation here
    }
    return refute(std::move(rows));
}

} // namespace

Feas pruneInfeasible(const PathCond& pc) {
    std::vector<LinRow> rows;
    std::vector<SymExpr> neqs;
    collectRows(pc.elems, rows, &neqs);
    for (const auto& e : neqs)
        if (auto c = e.asConst(); c && *c == 0)
            return Feas::Infeasible;
    if (refute(rows))
        return Feas::Infeasible;
    // A disequality e != 0 is refuted when the affine part forces e == 0.
    for (const auto& e : neqs) {
        BoolAtom ge{Rel::Ge0, [&] { SymExpr x = e; x.k -= 1; return x; }()};          // e >= 1
        BoolAtom le{Rel::Ge0, [&] { SymExpr x = neg(e); x.k -= 1; return x; }()};     // e <= -1
        if (refuteWith(pc, ge) && refuteWith(pc, le))
            return Feas::Infeasible;
    }
    // Each disjunction must keep at least one rationally consistent alternative.
    for (const auto& el : pc.elems) {
        const auto* d = std::get_if<Disjunction>(&el.v);
        if (!d)
            continue;
        bool anyAlive = false;
        for (const auto& alt : d->alts) {
            std::vector<LinRow> sys = rows;
            collectRows(alt, sys, nullptr);
            if (!refute(sys)) {
                anyAlive = true;
                break;
            }
        }
        if (!anyAlive && !d->alts.empty())
            return Feas::Infeasible;
    }
    return Feas::Unknown;
}

bool implies(const PathCond& pc, const BoolAtom& atom) {
    switch (atom.rel) {
    case Rel::Ge0: {
        if (auto c = atom.e.asConst())
            return *c >= 0;
        return refuteWith(pc, negate(atom));
    }
    case Rel::Eq0: {
        if (auto c = atom.e.asConst())
            return *c == 0;
        BoolAtom ge{Rel::Ge0, [&] { SymExpr x = atom.e; x.k -= 1; return x; }()};
        BoolAtom le{Rel::Ge0, [&] { SymExpr x = neg(atom.e); x.k -= 1; return x; }()};
        return refuteWith(pc, ge) && refuteWith(pc, le);
    }
    case Rel::Ne0: {
        if (auto c = atom.e.asConst())
            return *c != 0;
        if (refuteWith(pc, BoolAtom{Rel::Eq0, atom.e}))
            return true;
        // an explicit matching disequality conjunct also suffices
        for (const auto& el : pc.elems) {
            const auto* a = std::get_if<BoolAtom>(&el.v);
            if (a && a->rel == Rel::Ne0 && (exprEq(a->e, atom.e) || exprEq(a->e, neg(atom.e))))
                return true;
        }
        return false;
    }
    }
    return false;
}

Cmp3 compareExprs(const SymExpr& a, const SymExpr& b, const PathCond& pc) {
    SymExpr d = sub(a, b);
    if (auto c = d.asConst())
        return *c == 0 ? Cmp3::MustEqual : Cmp3::MustDiffer;
    if (implies(pc, BoolAtom{Rel::Eq0, d}))
        return Cmp3::MustEqual;
    if (implies(pc, BoolAtom{Rel::Ne0, d}))
        return Cmp3::MustDiffer;
    SymExpr dm1 = d;
    dm1.k -= 1;
    if (implies(pc, BoolAtom{Rel::Ge0, dm1})) // d >= 1
        return Cmp3::MustDiffer;
    SymExpr nd = neg(d);
    nd.k -= 1;
    if (implies(pc, BoolAtom{Rel::Ge0, nd})) // d <= -1
        return Cmp3::MustDiffer;
    return Cmp3::Unknown;
}

std::optional<long long> lowerBound(const PathCond& pc, const SymExpr& e) {
    if (auto c = e.asConst())
        return *c;
    long long lo = -(1LL << 31), hi = (1LL << 31);
    auto holds = [&](long long L) {
        SymExpr x = e;
        x.k -= L;
        return implies(pc, BoolAtom{Rel::Ge0, x}); // e >= L
    };
    if (!holds(lo))
        return std::nullopt;
    while (lo < hi) {
        long long mid = lo + (hi - lo + 1) / 2;
        if (holds(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::optional<long long> upperBound(const PathCond& pc, const SymExpr& e) {
    auto lb = lowerBound(pc, neg(e));
    if (!lb)
        return std::nullopt;
    return -*lb;
}

namespace {

bool atomIsInternal(const AtomPtr& a, const std::function<bool(const AtomPtr&)>& pred) {
    return pred(a);
}

} // namespace

std::optional<SymExpr> rewriteWithoutInternal(const PathCond& pc, const SymExpr& e,
                                              const std::function<bool(const AtomPtr&)>& isInternal) {
    bool hasInternal = false;
    for (const auto& [c, a] : e.terms)
        if (atomIsInternal(a, isInternal))
            hasInternal = true;
    if (!hasInternal)
        return e;

    // Pin t := e, eliminate every internal atom, then look for a t == f pair
    // among the surviving inequalities.
    AtomPtr t = makeBaseAtom(0xFFFFFFFFu, "^t");
    std::vector<LinRow> rows;
    collectRows(pc.elems, rows, nullptr);
    {
        SymExpr d = sub(atomExpr(t), e);
        addGe0(rows, d);
        addGe0(rows, neg(d));
    }

    std::set<AtomPtr, AtomLess> internals;
    for (const auto& r : rows)
        for (const auto& [a, c] : r.c)
            if (!atomEq(a, t) && atomIsInternal(a, isInternal))
                internals.insert(a);

    for (const auto& v : internals) {
        std::vector<LinRow> keep, pos, negs;
        for (auto& r : rows) {
            auto it = r.c.find(v);
            if (it == r.c.end())
                keep.push_back(std::move(r));
            else if (it->second > 0)
                pos.push_back(std::move(r));
            else
                negs.push_back(std::move(r));
        }
        for (const auto& p : pos) {
            for (const auto& n : negs) {
                long long a = p.c.at(v);
                long long b = -n.c.at(v);
                long long g = std::gcd(a, b);
                long long mp = b / g, mn = a / g;
                LinRow r;
                bool overflow = false;
                for (const auto& src : {std::pair{&p, mp}, std::pair{&n, mn}}) {
                    for (const auto& [atom, c] : src.first->c) {
                        long long tmp;
                        if (mulOverflow(c, src.second, tmp) ||
                            addOverflow(r.c[atom], tmp, r.c[atom]))
                            overflow = true;
                    }
                    long long tmp;
                    if (mulOverflow(src.first->k, src.second, tmp) || addOverflow(r.k, tmp, r.k))
                        overflow = true;
                }
                if (overflow)
                    return std::nullopt;
                for (auto it = r.c.begin(); it != r.c.end();)
                    it = it->second == 0 ? r.c.erase(it) : std::next(it);
                keep.push_back(std::move(r));
            }
        }
        if (keep.size() > kMaxRows)
            return std::nullopt;
        rows = std::move(keep);
    }

    // Match c*t <= f with c*t >= f (rest2 == -rest1, k2 == -k1).
    for (size_t i = 0; i < rows.size(); ++i) {
        auto it = rows[i].c.find(t);
        if (it == rows[i].c.end())
            continue;
        long long c1 = it->second;
        for (size_t j = 0; j < rows.size(); ++j) {
            if (i == j)
                continue;
            auto jt = rows[j].c.find(t);
            if (jt == rows[j].c.end() || jt->second != -c1)
                continue;
            bool mirror = rows[j].k == -rows[i].k && rows[j].c.size() == rows[i].c.size();
            if (mirror) {
                for (const auto& [a, c] : rows[i].c) {
                    if (atomEq(a, t))
                        continue;
                    auto f = rows[j].c.find(a);
                    if (f == rows[j].c.end() || f->second != -c) {
                        mirror = false;
                        break;
                    }
                }
            }
            if (!mirror)
                continue;
            // c1*t + rest + k == 0  =>  t = -(rest + k)/c1
            long long denom = -c1;
            SymExpr num = constExpr(rows[i].k);
            bool bad = false;
            for (const auto& [a, c] : rows[i].c) {
                if (atomEq(a, t))
                    continue;
                if (atomIsInternal(a, isInternal))
                    bad = true;
                num = add(num, SymExpr{0, {{c, a}}});
            }
            if (bad)
                continue;
            if (num.k % denom != 0)
                continue;
            bool divisible = true;
            for (const auto& [c, a] : num.terms)
                if (c % denom != 0)
                    divisible = false;
            if (!divisible)
                continue;
            SymExpr out = constExpr(num.k / denom);
            for (const auto& [c, a] : num.terms)
                out = add(out, SymExpr{0, {{c / denom, a}}});
            return out;
        }
    }
    return std::nullopt;
}

} // namespace arcs
