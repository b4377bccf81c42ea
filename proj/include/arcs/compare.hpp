// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "arcs/symstate.hpp"

namespace arcs {

// Sound, incomplete reasoning over the affine fragment of a path condition.
// Atoms (symbolic values, opaque reads, products, aggregates) are treated as
// free rational variables; MustEqual/MustDiffer/Infeasible answers are only
// given when derivable, everything else is Unknown.

enum class Cmp3 { MustEqual, MustDiffer, Unknown };
enum class Feas { Feasible, Infeasible, Unknown };

Feas pruneInfeasible(const PathCond& pc);

// pc => atom, by refuting pc && !atom with Fourier-Motzkin elimination.
bool implies(const PathCond& pc, const BoolAtom& atom);

Cmp3 compareExprs(const SymExpr& a, const SymExpr& b, const PathCond& pc);

// Tightest constant bounds derivable from the affine conjuncts.
std::optional<long long> lowerBound(const PathCond& pc, const SymExpr& e);
std::optional<long long> upperBound(const PathCond& pc, const SymExpr& e);

// Rewrites e into an expression free of atoms matched by `isInternal`, when
// pc's affine equalities pin e to such a form (used by contract projection).
std::optional<SymExpr> rewriteWithoutInternal(const PathCond& pc, const SymExpr& e,
                                              const std::function<bool(const AtomPtr&)>& isInternal);

} // namespace arcs
