// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "arcs/contracts.hpp"
#include "arcs/frontend.hpp"

namespace arcs {

// Deterministic ACSL rendering. Quantifiers use half-open ranges
// (`\forall integer k; lo <= k < hi ==> body`), internal half-open assigns
// ranges convert to ACSL's inclusive `a[lo .. hi-1]` at emission.

std::string renderLin(const SrcLin& lin);
std::string renderFormula(const SrcFormula& f);
std::string renderAssigns(const std::vector<AssignsRange>& ranges); // "\nothing" when empty

struct AnnotationSpan {
    int line = 0; // 1-based source line the block precedes
    std::string kind;
    std::string text;
};

struct AnnotatedSource {
    std::string text;
    std::vector<AnnotationSpan> spans;
};

// Weaves contract blocks above function headers and loop blocks above loop
// statements; an existing annotation block immediately preceding a function
// is replaced. Stripping all /*@ ... */ blocks recovers the unannotated
// source byte-for-byte.
AnnotatedSource annotate(const SourceFile& src, const Program& prog,
                         const std::vector<Contract>& contracts);

std::string stripAnnotations(const std::string& text);

} // namespace arcs
