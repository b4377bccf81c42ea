// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcs/contracts.hpp"
#include "arcs/frontend.hpp"

namespace arcs {

// Concrete big-step interpreter over the AST plus the randomized/exhaustive
// contract validator. Out-of-bounds accesses are trapped (and such runs are
// excluded from validation with a warning); fuel exhaustion reports
// non-termination.

struct ConcreteState {
    std::map<std::string, long long> ints;
    std::map<std::string, std::vector<long long>> arrays;

    std::string describe() const;
};

struct TraceEvent {
    int loopId = -1;
    int srcLine = 0;         // source line of the loop statement
    long long iteration = 0; // strictly increasing per loop per run
    ConcreteState snapshot;
};

struct InterpResult {
    enum class Status { Ok, NonTermination, OutOfBounds };
    Status status = Status::Ok;
    ConcreteState final;
    std::optional<long long> result;
    std::vector<TraceEvent> trace;
    std::string detail;
};

InterpResult interpret(const Program& prog, const FunctionDef& fd, const ConcreteState& input,
                       long long fuel = 100000);

struct GenSpec {
    int lenMax = 4;
    long long valLo = -2, valHi = 2;
    long long scalarLo = -4, scalarHi = 4;
    unsigned long long maxExhaustive = 60000;
    int samples = 3000;
    unsigned seed = 12345;
    std::map<std::string, std::string> lenLinks; // scalar fixed to len(array)

    // shrink the domain with the number of array parameters so exhaustive
    // enumeration stays within budget
    static GenSpec forFunction(const FunctionDef& fd);
};

// Exhaustive enumeration when the domain fits the budget, rejection sampling
// otherwise; every yielded state satisfies pre. Arrays share one length.
// Throws Error(PreUnsat) when no input satisfies the precondition.
std::vector<ConcreteState> genInputs(const FunctionDef& fd, const BoolPtr& pre,
                                     const GenSpec& spec);

enum class Truth { True, False, Undef };

struct EvalEnv {
    const ConcreteState* entry = nullptr;
    const ConcreteState* current = nullptr;
    std::optional<long long> result;
    std::map<std::string, long long> bound;
};

Truth evalFormula(const SrcFormula& f, EvalEnv& env);
std::optional<long long> evalLin(const SrcLin& lin, EvalEnv& env);

struct ValidationReport {
    long long inputsTested = 0;
    struct Failure {
        ConcreteState input;
        std::string check; // "post", "assigns", "invariant"
        std::string detail;
    };
    std::vector<Failure> failures;
    std::vector<std::string> warnings;
};

ValidationReport validateContract(const Program& prog, const FunctionDef& fd,
                                  const Contract& contract,
                                  const std::vector<ConcreteState>& inputs,
                                  long long fuel = 100000);

} // namespace arcs
