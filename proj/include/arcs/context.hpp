// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arcs/ast.hpp"
#include "arcs/diagnostics.hpp"
#include "arcs/symexpr.hpp"

namespace arcs {

struct AnalysisOptions {
    int pathBudget = 64;
    std::vector<std::string> plugins = {"search", "maxmin", "affine", "assigns", "fill"};
    bool dumpPaths = false;
    bool dumpIr = false;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Per-run registries: symbolic values with their origins, base-address
// constants, and the projection tables tying symbols back to source terms.
// One context per analyzed function; the fresh counters are atomic so paths
// may be stepped concurrently.
class AnalysisContext {
  public:
    explicit AnalysisContext(AnalysisOptions opts = {});

    uint32_t freshSym(SymOrigin origin, std::string name, int loopId = -1);
    SymInfo info(uint32_t id) const; // by value: the registry may grow

    AtomPtr freshBase(const std::string& name);
    uint32_t placeholderSym() const { return placeholder_; } // i_off

    void checkDeadline() const;

    // projection tables, filled by the executor's initState
    std::map<std::string, uint32_t> entrySymOfVar;
    std::map<std::string, uint32_t> lenSymOfArray;
    std::map<std::string, AtomPtr> blockBaseOfArray;  // array block cells
    std::map<std::string, AtomPtr> cellBaseOfVar;     // scalar / pointer cells
    std::set<std::string> arrayParams;
    std::set<std::string> scalarParams;
    std::set<std::string> assignedInBody; // drives \old rendering

    std::string arrayOfBase(const AtomPtr& base) const; // "" when not a block base

    AnalysisOptions options;

  private:
    std::vector<SymInfo> syms_;
    std::vector<std::string> baseNames_;
    uint32_t placeholder_ = 0;
    mutable std::mutex mu_;
};

} // namespace arcs
