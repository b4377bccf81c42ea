// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/context.hpp"

namespace arcs {

AnalysisContext::AnalysisContext(AnalysisOptions opts) : options(std::move(opts)) {
    placeholder_ = freshSym(SymOrigin::Placeholder, "i_off");
}

uint32_t AnalysisContext::freshSym(SymOrigin origin, std::string name, int loopId) {
    std::lock_guard<std::mutex> lock(mu_);
    syms_.push_back(SymInfo{origin, std::move(name), loopId});
    return static_cast<uint32_t>(syms_.size() - 1);
}

SymInfo AnalysisContext::info(uint32_t id) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (id >= syms_.size())
        throw Error(ErrKind::Internal, "unknown symbolic value s" + std::to_string(id));
    return syms_[id];
}

AtomPtr AnalysisContext::freshBase(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    baseNames_.push_back(name);
    return makeBaseAtom(static_cast<uint32_t>(baseNames_.size() - 1), name);
}

void AnalysisContext::checkDeadline() const {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
        throw Error(ErrKind::Timeout, "analysis deadline exceeded");
}

std::string AnalysisContext::arrayOfBase(const AtomPtr& base) const {
    for (const auto& [name, b] : blockBaseOfArray)
        if (atomEq(b, base))
            return name;
    return "";
}

} // namespace arcs
