// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/symexpr.hpp"

#include <algorithm>
#include <sstream>

namespace arcs {

AtomPtr makeSymAtom(uint32_t id) {
    auto a = std::make_shared<Atom>();
    a->v = SymAtom{id};
    return a;
}

AtomPtr makeReadAtom(SymAddr addr, int epoch) {
    auto a = std::make_shared<Atom>();
    a->v = ReadAtom{std::move(addr), epoch};
    return a;
}

AtomPtr makeAggAtom(AggOp op, SymAddr start, SymExpr len) {
    auto a = std::make_shared<Atom>();
    a->v = AggAtom{op, std::move(start), std::move(len)};
    return a;
}

AtomPtr makeBaseAtom(uint32_t id, std::string name) {
    auto a = std::make_shared<Atom>();
    a->v = BaseAtom{id, std::move(name)};
    return a;
}

AtomPtr makeCurAtom(std::string name) {
    auto a = std::make_shared<Atom>();
    a->v = CurAtom{std::move(name)};
    return a;
}

static int kindRank(const Atom& a) { return static_cast<int>(a.v.index()); }

static int cmp3(long long a, long long b) { return a < b ? -1 : a > b ? 1 : 0; }

int cmpAtom(const AtomPtr& pa, const AtomPtr& pb) {
    if (pa.get() == pb.get())
        return 0;
    const Atom& a = *pa;
    const Atom& b = *pb;
    if (int c = cmp3(kindRank(a), kindRank(b)))
        return c;
    switch (a.v.index()) {
    case 0: return cmp3(std::get<SymAtom>(a.v).id, std::get<SymAtom>(b.v).id);
    case 1: {
        const auto& ra = std::get<ReadAtom>(a.v);
        const auto& rb = std::get<ReadAtom>(b.v);
        if (int c = cmpAtom(ra.addr.base, rb.addr.base))
            return c;
        if (int c = cmpExpr(ra.addr.offset, rb.addr.offset))
            return c;
        return cmp3(ra.epoch, rb.epoch);
    }
    case 2: {
        const auto& ga = std::get<AggAtom>(a.v);
        const auto& gb = std::get<AggAtom>(b.v);
        if (int c = cmp3(static_cast<int>(ga.op), static_cast<int>(gb.op)))
            return c;
        if (int c = cmpAtom(ga.start.base, gb.start.base))
            return c;
        if (int c = cmpExpr(ga.start.offset, gb.start.offset))
            return c;
        return cmpExpr(ga.len, gb.len);
    }
    case 3: {
        const auto& fa = std::get<ProdAtom>(a.v).factors;
        const auto& fb = std::get<ProdAtom>(b.v).factors;
        if (int c = cmp3(static_cast<long long>(fa.size()), static_cast<long long>(fb.size())))
            return c;
        for (size_t i = 0; i < fa.size(); ++i)
            if (int c = cmpAtom(fa[i], fb[i]))
                return c;
        return 0;
    }
    case 4: return cmp3(std::get<BaseAtom>(a.v).id, std::get<BaseAtom>(b.v).id);
    default: {
        const auto& ca = std::get<CurAtom>(a.v).name;
        const auto& cb = std::get<CurAtom>(b.v).name;
        return ca < cb ? -1 : ca > cb ? 1 : 0;
    }
    }
}

int cmpExpr(const SymExpr& a, const SymExpr& b) {
    if (int c = cmp3(a.k, b.k))
        return c;
    if (int c = cmp3(static_cast<long long>(a.terms.size()), static_cast<long long>(b.terms.size())))
        return c;
    for (size_t i = 0; i < a.terms.size(); ++i) {
        if (int c = cmp3(a.terms[i].first, b.terms[i].first))
            return c;
        if (int c = cmpAtom(a.terms[i].second, b.terms[i].second))
            return c;
    }
    return 0;
}

bool addrEq(const SymAddr& a, const SymAddr& b) {
    return atomEq(a.base, b.base) && exprEq(a.offset, b.offset);
}

SymExpr constExpr(long long k) {
    SymExpr e;
    e.k = k;
    return e;
}

SymExpr atomExpr(AtomPtr a) {
    SymExpr e;
    e.terms.emplace_back(1, std::move(a));
    return e;
}

SymExpr symExpr(uint32_t symId) { return atomExpr(makeSymAtom(symId)); }

SymExpr add(const SymExpr& a, const SymExpr& b) {
    SymExpr out;
    out.k = a.k + b.k;
    size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        int c = i == a.terms.size() ? 1
              : j == b.terms.size() ? -1
                                    : cmpAtom(a.terms[i].second, b.terms[j].second);
        if (c < 0) {
            if (a.terms[i].first != 0)
                out.terms.push_back(a.terms[i]);
            ++i;
        } else if (c > 0) {
            if (b.terms[j].first != 0)
                out.terms.push_back(b.terms[j]);
            ++j;
        } else {
            long long coeff = a.terms[i].first + b.terms[j].first;
            if (coeff != 0)
                out.terms.emplace_back(coeff, a.terms[i].second);
            ++i;
            ++j;
        }
    }
    return out;
}

SymExpr neg(const SymExpr& a) { return mulConst(a, -1); }

SymExpr sub(const SymExpr& a, const SymExpr& b) { return add(a, neg(b)); }

SymExpr mulConst(const SymExpr& a, long long c) {
    if (c == 0)
        return constExpr(0);
    SymExpr out;
    out.k = a.k * c;
    out.terms.reserve(a.terms.size());
    for (const auto& [coeff, atom] : a.terms)
        out.terms.emplace_back(coeff * c, atom);
    return out;
}

static AtomPtr prodOf(const AtomPtr& a, const AtomPtr& b) {
    std::vector<AtomPtr> fs;
    auto flatten = [&fs](const AtomPtr& x) {
        if (const auto* p = std::get_if<ProdAtom>(&x->v))
            fs.insert(fs.end(), p->factors.begin(), p->factors.end());
        else
            fs.push_back(x);
    };
    flatten(a);
    flatten(b);
    std::sort(fs.begin(), fs.end(), AtomLess{});
    auto atom = std::make_shared<Atom>();
    atom->v = ProdAtom{std::move(fs)};
    return atom;
}

SymExpr mul(const SymExpr& a, const SymExpr& b) {
    SymExpr out = constExpr(a.k * b.k);
    for (const auto& [cb, tb] : b.terms)
        out = add(out, SymExpr{0, {{a.k * cb, tb}}});
    for (const auto& [ca, ta] : a.terms)
        out = add(out, SymExpr{0, {{ca * b.k, ta}}});
    for (const auto& [ca, ta] : a.terms)
        for (const auto& [cb, tb] : b.terms)
            out = add(out, SymExpr{0, {{ca * cb, prodOf(ta, tb)}}});
    return out;
}

static AtomPtr substituteAtom(const AtomPtr& a, const Subst& s, bool& becameExpr, SymExpr& expr);

SymExpr substitute(const SymExpr& e, const Subst& s) {
    if (s.empty())
        return e;
    SymExpr out = constExpr(e.k);
    for (const auto& [coeff, atom] : e.terms) {
        bool becameExpr = false;
        SymExpr repl;
        AtomPtr na = substituteAtom(atom, s, becameExpr, repl);
        if (becameExpr)
            out = add(out, mulConst(repl, coeff));
        else
            out = add(out, SymExpr{0, {{coeff, na}}});
    }
    return out;
}

SymAddr substitute(const SymAddr& a, const Subst& s) {
    return SymAddr{a.base, substitute(a.offset, s)};
}

static AtomPtr substituteAtom(const AtomPtr& a, const Subst& s, bool& becameExpr, SymExpr& expr) {
    becameExpr = false;
    switch (a->v.index()) {
    case 0: {
        auto it = s.syms.find(std::get<SymAtom>(a->v).id);
        if (it != s.syms.end()) {
            becameExpr = true;
            expr = it->second;
        }
        return a;
    }
    case 1: {
        const auto& r = std::get<ReadAtom>(a->v);
        SymExpr off = substitute(r.addr.offset, s);
        if (exprEq(off, r.addr.offset))
            return a;
        return makeReadAtom(SymAddr{r.addr.base, std::move(off)}, r.epoch);
    }
    case 2: {
        const auto& g = std::get<AggAtom>(a->v);
        return makeAggAtom(g.op, substitute(g.start, s), substitute(g.len, s));
    }
    case 3: {
        const auto& p = std::get<ProdAtom>(a->v);
        SymExpr prod = constExpr(1);
        bool changed = false;
        for (const auto& f : p.factors) {
            bool be = false;
            SymExpr fe;
            AtomPtr nf = substituteAtom(f, s, be, fe);
            changed = changed || be || nf.get() != f.get();
            prod = mul(prod, be ? fe : atomExpr(nf));
        }
        if (!changed)
            return a;
        becameExpr = true;
        expr = std::move(prod);
        return a;
    }
    case 4: return a;
    default: {
        auto it = s.curVars.find(std::get<CurAtom>(a->v).name);
        if (it != s.curVars.end()) {
            becameExpr = true;
            expr = it->second;
        }
        return a;
    }
    }
}

void collectSyms(const SymExpr& e, std::set<uint32_t>& out) {
    for (const auto& [coeff, atom] : e.terms) {
        (void)coeff;
        switch (atom->v.index()) {
        case 0: out.insert(std::get<SymAtom>(atom->v).id); break;
        case 1: collectSyms(std::get<ReadAtom>(atom->v).addr.offset, out); break;
        case 2: {
            const auto& g = std::get<AggAtom>(atom->v);
            collectSyms(g.start.offset, out);
            collectSyms(g.len, out);
            break;
        }
        case 3:
            for (const auto& f : std::get<ProdAtom>(atom->v).factors)
                collectSyms(atomExpr(f), out);
            break;
        default: break;
        }
    }
}

bool mentionsSym(const SymExpr& e, uint32_t id) {
    std::set<uint32_t> s;
    collectSyms(e, s);
    return s.count(id) != 0;
}

static std::string showAtom(const AtomPtr& a) {
    switch (a->v.index()) {
    case 0: return "s" + std::to_string(std::get<SymAtom>(a->v).id);
    case 1: {
        const auto& r = std::get<ReadAtom>(a->v);
        return "rd(" + show(r.addr) + "," + std::to_string(r.epoch) + ")";
    }
    case 2: {
        const auto& g = std::get<AggAtom>(a->v);
        const char* op = g.op == AggOp::Sum ? "sum" : g.op == AggOp::Max ? "max" : "min";
        return std::string(op) + "(" + show(g.start) + "," + show(g.len) + ")";
    }
    case 3: {
        std::string out;
        const auto& fs = std::get<ProdAtom>(a->v).factors;
        for (size_t i = 0; i < fs.size(); ++i) {
            if (i)
                out += "*";
            out += showAtom(fs[i]);
        }
        return out;
    }
    case 4: return std::get<BaseAtom>(a->v).name;
    default: return "cur(" + std::get<CurAtom>(a->v).name + ")";
    }
}

std::string show(const SymExpr& e) {
    std::ostringstream os;
    bool first = true;
    if (e.k != 0 || e.terms.empty()) {
        os << e.k;
        first = false;
    }
    for (const auto& [coeff, atom] : e.terms) {
        if (first) {
            if (coeff == -1)
                os << "-";
            else if (coeff != 1)
                os << coeff << "*";
            first = false;
        } else if (coeff < 0) {
            os << " - ";
            if (coeff != -1)
                os << -coeff << "*";
        } else {
            os << " + ";
            if (coeff != 1)
                os << coeff << "*";
        }
        os << showAtom(atom);
    }
    return os.str();
}

std::string show(const SymAddr& a) {
    std::string base = showAtom(a.base);
    if (a.offset.isZero())
        return base;
    return base + "+" + show(a.offset);
}

} // namespace arcs
