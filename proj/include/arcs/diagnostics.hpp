// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace arcs {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

enum class ErrKind {
    Lex,
    Parse,
    Unsupported,     // construct outside the supported subset; analysis must abort (Fail)
    UnboundVariable,
    PathExplosion,
    NonTermination,
    OutOfBounds,
    PreUnsat,
    EmptyConfiguration,
    NonConcretizable,
    Timeout,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrKind k, std::string msg, SourceLoc where = {})
        : std::runtime_error(std::move(msg)), kind(k), loc(where) {}

    ErrKind kind;
    SourceLoc loc;
};

inline std::string locString(SourceLoc loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

} // namespace arcs
