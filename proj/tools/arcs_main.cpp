// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
//
// arcs - array-carrying symbolic execution for C function contracts.
//
//   arcs analyze file.c [--function F] [--pre EXPR] [--plugins LIST] ...
//   arcs validate file.c [--validate exhaustive|random:N]
//   arcs corpus DIR [--jobs N] [--timeout-s S] [--json]

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "arcs/pipeline.hpp"

namespace {

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

bool parseValidateMode(const std::string& mode, arcs::PipelineOptions& opts) {
    if (mode == "exhaustive") {
        opts.validate = arcs::PipelineOptions::Validate::Exhaustive;
        return true;
    }
    if (mode == "off") {
        opts.validate = arcs::PipelineOptions::Validate::Off;
        return true;
    }
    if (mode.rfind("random:", 0) == 0) {
        opts.validate = arcs::PipelineOptions::Validate::Random;
        opts.randomSamples = std::stoi(mode.substr(7));
        return true;
    }
    return false;
}

int reportExit(const arcs::FileReport& report, bool jsonOut, bool dumpPaths, bool dumpIr) {
    if (!report.error.empty())
        std::cerr << "error: " << report.error << "\n";
    for (const auto& fr : report.functions) {
        std::cout << fr.name << ": " << arcs::statusText(fr.status);
        if (!fr.reason.empty())
            std::cout << " (" << fr.reason << ")";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", fr.genMs);
        std::cout << "  [" << buf << " ms]";
        if (fr.validated)
            std::cout << "  oracle: " << fr.validation.inputsTested << " inputs, "
                      << fr.validation.failures.size() << " failures";
        std::cout << "\n";
        if (dumpIr && !fr.dumpIr.empty())
            std::cout << fr.dumpIr;
        if (dumpPaths && !fr.dumpPaths.empty())
            std::cout << fr.dumpPaths;
        for (const auto& f : fr.validation.failures)
            std::cout << "  counterexample [" << f.check << "]: " << f.input.describe() << " -- "
                      << f.detail << "\n";
        for (const auto& w : fr.validation.warnings)
            std::cout << "  warning: " << w << "\n";
    }
    if (jsonOut)
        std::cout << report.contractJson;
    return report.exitCode;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"array-carrying symbolic execution for C function contracts"};
    app.require_subcommand(1);

    std::string file, dir, function, preExpr, pluginList, validateMode = "exhaustive";
    int pathBudget = 64, jobs = 1;
    double timeoutS = 10.0;
    bool jsonOut = false, dumpPaths = false, dumpIr = false;

    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--function", function, "analyze only this function");
        cmd->add_option("--pre", preExpr, "precondition expression overriding the source");
        cmd->add_option("--plugins", pluginList, "comma list: search,maxmin,affine,assigns,fill");
        cmd->add_option("--path-budget", pathBudget, "maximum number of symbolic paths");
        cmd->add_option("--validate", validateMode, "exhaustive | random:N | off");
        cmd->add_option("--timeout-s", timeoutS, "per-file analysis deadline in seconds");
        cmd->add_flag("--dump-paths", dumpPaths, "print each final path");
        cmd->add_flag("--dump-ir", dumpIr, "print lowered IR and CFG");
        cmd->add_flag("--json", jsonOut, "print the JSON report to stdout");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "synthesize contracts for one file");
    analyze->add_option("file", file, "C source file")->required();
    addCommon(analyze);

    CLI::App* validateCmd = app.add_subcommand("validate", "synthesize and oracle-check contracts");
    validateCmd->add_option("file", file, "C source file")->required();
    addCommon(validateCmd);

    CLI::App* corpus = app.add_subcommand("corpus", "run a directory of benchmarks");
    corpus->add_option("dir", dir, "directory of .c files")->required();
    corpus->add_option("--jobs", jobs, "parallel workers");
    addCommon(corpus);

    CLI11_PARSE(app, argc, argv);

    arcs::PipelineOptions opts;
    opts.onlyFunction = function;
    opts.preOverride = preExpr;
    opts.timeoutSec = timeoutS;
    opts.jobs = jobs;
    opts.analysis.pathBudget = pathBudget;
    opts.analysis.dumpPaths = dumpPaths;
    opts.analysis.dumpIr = dumpIr;
    if (!pluginList.empty())
        opts.analysis.plugins = splitList(pluginList);
    if (!parseValidateMode(validateMode, opts)) {
        std::cerr << "error: bad --validate mode '" << validateMode << "'\n";
        return 2;
    }

    try {
        if (analyze->parsed() || validateCmd->parsed()) {
            opts.writeOutputs = analyze->parsed();
            arcs::FileReport report = arcs::analyzeFile(file, opts);
            if (validateCmd->parsed()) {
                // validate prints the oracle report JSON
                std::cout << report.contractJson;
            }
            return reportExit(report, jsonOut && analyze->parsed(), dumpPaths, dumpIr);
        }
        opts.writeOutputs = false;
        arcs::CorpusReport report = arcs::runCorpus(dir, opts);
        if (jsonOut)
            std::cout << report.json();
        else
            std::cout << report.table();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
