// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/segments.hpp"

#include <algorithm>
#include <sstream>

namespace arcs {

bool summaryEq(const ContentSummary& a, const ContentSummary& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case ContentSummary::Kind::Unknown: return true;
    case ContentSummary::Kind::Indexed: return exprEq(a.phi, b.phi);
    case ContentSummary::Kind::Aggregate: return a.op == b.op && exprEq(a.aggValue, b.aggValue);
    }
    return false;
}

namespace {

SymExpr rebase(const AnalysisContext& ctx, const SymExpr& phi, const SymExpr& newOffset) {
    Subst s;
    s.syms[ctx.placeholderSym()] = newOffset;
    return substitute(phi, s);
}

// containment tests against [off0, off0+len)
bool mayContain(const SymExpr& off, const Segment& s, const PathCond& pc) {
    // excluded when off < start or off >= start+len is implied
    SymExpr beforeStart = sub(s.start.offset, off); // > 0 means off < start
    beforeStart.k -= 1;
    if (implies(pc, BoolAtom{Rel::Ge0, beforeStart}))
        return false;
    SymExpr pastEnd = sub(off, add(s.start.offset, s.len)); // >= 0 means off >= end
    if (implies(pc, BoolAtom{Rel::Ge0, pastEnd}))
        return false;
    return true;
}

bool mustContain(const SymExpr& off, const Segment& s, const PathCond& pc) {
    SymExpr fromStart = sub(off, s.start.offset);
    if (!implies(pc, BoolAtom{Rel::Ge0, fromStart}))
        return false;
    SymExpr beforeEnd = sub(add(s.start.offset, s.len), off);
    beforeEnd.k -= 1;
    return implies(pc, BoolAtom{Rel::Ge0, beforeEnd});
}

} // namespace

SegReadResult segRead(const AnalysisContext& ctx, const SegmentStore& store, const SymAddr& a,
                      const PathCond& pc) {
    SegReadResult out;
    auto it = store.byBase.find(a.base);
    if (it == store.byBase.end())
        return out;
    int candidates = 0;
    bool definiteHit = false;
    for (const auto& seg : it->second) {
        if (!mayContain(a.offset, seg, pc))
            continue;
        ++candidates;
        if (seg.summary.kind == ContentSummary::Kind::Indexed) {
            out.facts.push_back(rebase(ctx, seg.summary.phi, sub(a.offset, seg.start.offset)));
            if (mustContain(a.offset, seg, pc))
                definiteHit = true;
        }
    }
    out.definite = definiteHit && candidates == 1 && out.facts.size() == 1;
    return out;
}

void segWrite(const AnalysisContext& ctx, SegmentStore& store, const SymAddr& a,
              const PathCond& pc) {
    auto it = store.byBase.find(a.base);
    if (it == store.byBase.end())
        return;
    std::vector<Segment> next;
    for (Segment& seg : it->second) {
        if (!mayContain(a.offset, seg, pc)) {
            next.push_back(std::move(seg));
            continue;
        }
        SymExpr rel = sub(a.offset, seg.start.offset);
        auto relC = rel.asConst();
        auto lenC = seg.len.asConst();
        if (relC && *relC >= 0 && (lenC || mustContain(a.offset, seg, pc))) {
            // prefix [0, j), cell j dropped, suffix [j+1, len)
            long long j = *relC;
            if (j > 0) {
                Segment prefix = seg;
                prefix.len = constExpr(j);
                next.push_back(std::move(prefix));
            }
            Segment suffix = seg;
            suffix.start.offset = add(seg.start.offset, constExpr(j + 1));
            suffix.len = sub(seg.len, constExpr(j + 1));
            if (suffix.summary.kind == ContentSummary::Kind::Indexed)
                suffix.summary.phi = rebase(
                    ctx, seg.summary.phi,
                    add(symExpr(ctx.placeholderSym()), constExpr(j + 1)));
            auto sLen = suffix.len.asConst();
            if (!sLen || *sLen > 0)
                next.push_back(std::move(suffix));
        } else {
            // symbolic relative offset: demote the whole segment
            seg.summary = ContentSummary::unknown();
            next.push_back(std::move(seg));
        }
    }
    if (next.empty())
        store.byBase.erase(it);
    else
        it->second = std::move(next);
}

namespace {

// Right segment is adjacent when its start offset normalizes exactly to
// left.start + left.len.
bool adjacent(const Segment& l, const Segment& r) {
    return exprEq(r.start.offset, add(l.start.offset, l.len));
}

bool mergeable(const AnalysisContext& ctx, const Segment& l, const Segment& r) {
    if (!adjacent(l, r))
        return false;
    if (l.summary.kind != r.summary.kind)
        return false;
    switch (l.summary.kind) {
    case ContentSummary::Kind::Unknown: return true;
    case ContentSummary::Kind::Indexed: {
        // l.phi(i_off + len_l) must equal r.phi(i_off)
        SymExpr shifted = rebase(ctx, l.summary.phi,
                                 add(symExpr(ctx.placeholderSym()), l.len));
        return exprEq(shifted, r.summary.phi);
    }
    case ContentSummary::Kind::Aggregate: return false; // no combination rule
    }
    return false;
}

} // namespace

void segMerge(const AnalysisContext& ctx, SegmentStore& store) {
    for (auto& [base, segs] : store.byBase) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < segs.size() && !changed; ++i) {
                for (size_t j = 0; j < segs.size() && !changed; ++j) {
                    if (i == j)
                        continue;
                    if (mergeable(ctx, segs[i], segs[j])) {
                        segs[i].len = add(segs[i].len, segs[j].len);
                        segs.erase(segs.begin() + static_cast<long>(j));
                        changed = true;
                    }
                }
            }
        }
        // keep offset-sorted where comparable (constant offsets first)
        std::stable_sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
            auto ca = a.start.offset.asConst();
            auto cb = b.start.offset.asConst();
            if (ca && cb)
                return *ca < *cb;
            if (ca != cb)
                return ca.has_value();
            return cmpExpr(a.start.offset, b.start.offset) < 0;
        });
    }
}

void insertSegment(const AnalysisContext& ctx, SegmentStore& store, Segment seg,
                   const PathCond& pc) {
    if (auto lenC = seg.len.asConst(); lenC && *lenC <= 0)
        return;
    auto& segs = store.byBase[seg.start.base];
    // drop existing coverage that may overlap the incoming range
    std::vector<Segment> kept;
    for (Segment& old : segs) {
        SymExpr oldEnd = add(old.start.offset, old.len);
        SymExpr newEnd = add(seg.start.offset, seg.len);
        SymExpr oldBeforeNew = sub(seg.start.offset, oldEnd); // >= 0: old entirely before
        SymExpr newBeforeOld = sub(old.start.offset, newEnd); // >= 0: old entirely after
        if (implies(pc, BoolAtom{Rel::Ge0, oldBeforeNew}) ||
            implies(pc, BoolAtom{Rel::Ge0, newBeforeOld}))
            kept.push_back(std::move(old));
    }
    kept.push_back(std::move(seg));
    segs = std::move(kept);
    segMerge(ctx, store);
}

std::vector<CellFact> denote(const AnalysisContext& ctx, const SegmentStore& store,
                             const std::map<uint32_t, long long>& valuation) {
    Subst s;
    for (const auto& [id, v] : valuation)
        s.syms[id] = constExpr(v);
    std::vector<CellFact> out;
    for (const auto& [base, segs] : store.byBase) {
        for (const auto& seg : segs) {
            SymExpr len = substitute(seg.len, s);
            SymExpr off = substitute(seg.start.offset, s);
            auto lenC = len.asConst();
            auto offC = off.asConst();
            if (!lenC || !offC)
                throw Error(ErrKind::NonConcretizable,
                            "segment bounds not concrete under valuation");
            if (seg.summary.kind != ContentSummary::Kind::Indexed)
                continue;
            for (long long i = 0; i < *lenC; ++i) {
                Subst cell = s;
                cell.syms[ctx.placeholderSym()] = constExpr(i);
                SymExpr v = substitute(seg.summary.phi, cell);
                auto vc = v.asConst();
                if (!vc)
                    throw Error(ErrKind::NonConcretizable,
                                "segment content not concrete under valuation");
                out.push_back(CellFact{base, *offC + i, *vc});
            }
        }
    }
    return out;
}

std::string show(const SegmentStore& store) {
    std::ostringstream os;
    for (const auto& [base, segs] : store.byBase) {
        for (const auto& seg : segs) {
            os << show(SymAddr{base, seg.start.offset}) << " .. +" << show(seg.len) << ") : ";
            switch (seg.summary.kind) {
            case ContentSummary::Kind::Unknown: os << "T"; break;
            case ContentSummary::Kind::Indexed: os << show(seg.summary.phi); break;
            case ContentSummary::Kind::Aggregate:
                os << (seg.summary.op == AggOp::Sum ? "sum" : seg.summary.op == AggOp::Max ? "max" : "min")
                   << "=" << show(seg.summary.aggValue);
                break;
            }
            os << "\n";
        }
    }
    return os.str();
}

} // namespace arcs
