// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "arcs/contracts.hpp"
#include "arcs/executor.hpp"
#include "arcs/frontend.hpp"

namespace arcs::test {

struct Analyzed {
    Program prog;
    AnalysisContext ctx;
    RunResult rr;
    Contract contract;

    Analyzed() : ctx(AnalysisOptions{}) {}
};

// parse + validate + run + synthesize for the named (or only) function
inline Analyzed analyzeSource(const std::string& text, const std::string& fn = "",
                              AnalysisOptions opts = {}) {
    Analyzed a;
    a.ctx = AnalysisContext(opts);
    a.prog = parseSource(SourceFile{"<test>", text});
    validate(a.prog);
    const FunctionDef* fd = fn.empty() ? &a.prog.functions.front() : a.prog.find(fn);
    a.rr = run(a.ctx, a.prog, *fd);
    a.contract = synthesize(a.ctx, a.rr, *fd, fd->declaredPre);
    return a;
}

inline std::string corpusDir() {
#ifdef ARCS_SOURCE_DIR
    return std::string(ARCS_SOURCE_DIR) + "/corpus";
#else
    return "corpus";
#endif
}

} // namespace arcs::test
