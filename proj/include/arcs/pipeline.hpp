// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arcs/acsl.hpp"
#include "arcs/oracle.hpp"

namespace arcs {

// End-to-end driver: parse -> validate -> run -> synthesize -> annotate ->
// oracle validation, with the Full/Partial/Fail/Timeout result taxonomy.

enum class FnStatus { Full, Partial, Fail, Timeout };

const char* statusText(FnStatus s);

struct PipelineOptions {
    AnalysisOptions analysis;
    std::string onlyFunction;          // --function
    std::string preOverride;           // --pre
    enum class Validate { Exhaustive, Random, Off } validate = Validate::Exhaustive;
    int randomSamples = 2000;
    double timeoutSec = 10.0;
    int jobs = 1;
    bool writeOutputs = false;         // <input>.annotated.c / <input>.contract.json
};

struct FunctionReport {
    std::string name;
    FnStatus status = FnStatus::Fail;
    std::string reason;
    double genMs = 0.0; // run + synthesize only
    std::optional<Contract> contract;
    ValidationReport validation;
    bool validated = false;
    std::string dumpPaths;
    std::string dumpIr;
};

struct FileReport {
    std::string path;
    bool parsed = false;
    std::string error;
    int exitCode = 0; // 0 ok, 2 parse, 3 unsupported, 4 budget/timeout
    std::vector<FunctionReport> functions;
    std::string annotatedText;
    std::string contractJson;
};

FileReport analyzeFile(const std::string& path, const PipelineOptions& opts);

struct CorpusReport {
    std::vector<FileReport> files;
    int full = 0, partial = 0, fail = 0, timeout = 0;
    double avgGenMs = 0.0;    // over generated cases only
    double medianGenMs = 0.0;

    std::string table() const;
    std::string json() const;
};

CorpusReport runCorpus(const std::string& dir, const PipelineOptions& opts);

std::string fileReportJson(const FileReport& report);

} // namespace arcs
