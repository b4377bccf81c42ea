// Copyright (c) arcs contributors.
// SPDX-License-Identifier: Apache-2.0
#include "arcs/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "arcs/executor.hpp"

namespace arcs {

using nlohmann::json;

const char* statusText(FnStatus s) {
    switch (s) {
    case FnStatus::Full: return "Full";
    case FnStatus::Partial: return "Partial";
    case FnStatus::Fail: return "Fail";
    case FnStatus::Timeout: return "Timeout";
    }
    return "?";
}

namespace {

json formulaJson(const SrcFormula& f) { return renderFormula(f); }

json contractToJson(const Contract& c) {
    json j;
    j["pre"] = formulaJson(c.pre);
    j["post_disjuncts"] = json::array();
    for (const auto& d : c.postDisjuncts)
        j["post_disjuncts"].push_back(formulaJson(d));
    j["assigns"] = json::array();
    for (const auto& r : c.assigns) {
        SrcLin hiIncl = r.endExcl;
        hiIncl.k -= 1;
        j["assigns"].push_back({{"array", r.array},
                                {"start", renderLin(r.start)},
                                {"end_inclusive", renderLin(hiIncl)}});
    }
    j["loops"] = json::array();
    for (const auto& ann : c.loops) {
        json lj;
        lj["line"] = ann.loc.line;
        lj["clauses"] = json::array();
        for (const auto& item : ann.items) {
            json cj;
            cj["plugin"] = item.plugin;
            if (item.kind == InvariantClause::Kind::LoopAssigns) {
                cj["kind"] = "loop_assigns";
                std::string txt;
                bool first = true;
                for (const auto& s : item.scalars) {
                    txt += (first ? "" : ", ") + s;
                    first = false;
                }
                for (const auto& r : item.ranges) {
                    SrcLin hiIncl = r.endExcl;
                    hiIncl.k -= 1;
                    txt += (first ? "" : ", ") + r.array + "[" + renderLin(r.start) + " .. " +
                           renderLin(hiIncl) + "]";
                    first = false;
                }
                cj["text"] = txt;
            } else {
                cj["kind"] = "loop_invariant";
                cj["text"] = renderFormula(item.formula);
            }
            lj["clauses"].push_back(std::move(cj));
        }
        j["loops"].push_back(std::move(lj));
    }
    if (c.projectionResiduals)
        j["projection_residuals"] = true;
    return j;
}

json validationToJson(const ValidationReport& v) {
    json j;
    j["inputs_tested"] = v.inputsTested;
    j["failures"] = json::array();
    for (const auto& f : v.failures)
        j["failures"].push_back(
            {{"input", f.input.describe()}, {"check", f.check}, {"detail", f.detail}});
    j["warnings"] = v.warnings;
    return j;
}


} // namespace

FileReport analyzeFile(const std::string& path, const PipelineOptions& opts) {
    FileReport report;
    report.path = path;

    SourceFile src;
    Program prog;
    try {
        src = readSource(path);
        prog = parseSource(src);
        validate(prog);
        report.parsed = true;
    } catch (const Error& e) {
        report.error = std::string(e.what()) +
                       (e.loc.line ? " at " + locString(e.loc) : std::string());
        report.exitCode = e.kind == ErrKind::Unsupported ? 3 : 2;
        return report;
    }

    BoolPtr preOverride;
    if (!opts.preOverride.empty()) {
        try {
            preOverride = parseBoolExpr(opts.preOverride);
        } catch (const Error& e) {
            report.error = std::string("--pre: ") + e.what();
            report.exitCode = 2;
            return report;
        }
    }

    std::vector<Contract> contracts;
    for (const FunctionDef& fd : prog.functions) {
        if (!opts.onlyFunction.empty() && fd.name != opts.onlyFunction)
            continue;
        FunctionReport fr;
        fr.name = fd.name;

        AnalysisOptions aopts = opts.analysis;
        if (opts.timeoutSec > 0)
            aopts.deadline = std::chrono::steady_clock::now() +
                             std::chrono::milliseconds(static_cast<long>(opts.timeoutSec * 1000));
        AnalysisContext ctx(aopts);
        BoolPtr pre = preOverride ? preOverride : fd.declaredPre;

        auto t0 = std::chrono::steady_clock::now();
        try {
            RunResult rr = run(ctx, prog, fd, preOverride);
            Contract c = synthesize(ctx, rr, fd, pre);
            fr.genMs = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
            if (ctx.options.dumpIr)
                fr.dumpIr = show(rr.lowered) + "\n" + show(rr.cfg);
            if (ctx.options.dumpPaths) {
                for (const auto& p : rr.finals)
                    fr.dumpPaths += showPath(ctx, p);
            }
            fr.contract = c;

            if (opts.validate != PipelineOptions::Validate::Off) {
                GenSpec spec = GenSpec::forFunction(fd);
                if (opts.validate == PipelineOptions::Validate::Random) {
                    spec.maxExhaustive = 0; // force sampling
                    spec.samples = opts.randomSamples;
                }
                std::vector<ConcreteState> inputs = genInputs(fd, pre, spec);
                fr.validation = validateContract(prog, fd, c, inputs);
                fr.validated = true;
            }

            bool clean = !fr.validated || fr.validation.failures.empty();
            if (fr.validated && fr.validation.failures.empty() && !c.projectionResiduals)
                fr.status = FnStatus::Full;
            else if (fr.contract)
                fr.status = FnStatus::Partial;
            fr.reason = !clean ? "oracle found counterexamples"
                        : c.projectionResiduals ? "projection residuals"
                        : !fr.validated ? "validation off"
                                        : "";
            contracts.push_back(c);
        } catch (const Error& e) {
            fr.genMs = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
            fr.reason = e.what();
            switch (e.kind) {
            case ErrKind::Timeout:
                fr.status = FnStatus::Timeout;
                report.exitCode = std::max(report.exitCode, 4);
                break;
            case ErrKind::PathExplosion:
                fr.status = FnStatus::Fail;
                report.exitCode = std::max(report.exitCode, 4);
                break;
            case ErrKind::PreUnsat:
            case ErrKind::EmptyConfiguration:
            case ErrKind::Unsupported:
            default:
                fr.status = FnStatus::Fail;
                report.exitCode = std::max(report.exitCode, 3);
                break;
            }
        }
        report.functions.push_back(std::move(fr));
    }

    if (report.functions.empty() && !opts.onlyFunction.empty()) {
        report.error = "function '" + opts.onlyFunction + "' not found";
        report.exitCode = 2;
        return report;
    }

    // annotated output and JSON sidecar
    AnnotatedSource annotated = annotate(src, prog, contracts);
    report.annotatedText = annotated.text;
    report.contractJson = fileReportJson(report);

    if (opts.writeOutputs) {
        std::ofstream outC(path + ".annotated.c", std::ios::binary);
        outC << report.annotatedText;
        std::ofstream outJ(path + ".contract.json", std::ios::binary);
        outJ << report.contractJson;
    }
    return report;
}

std::string fileReportJson(const FileReport& report) {
    json j;
    j["schema"] = 1;
    j["file"] = report.path;
    if (!report.error.empty())
        j["error"] = report.error;
    j["functions"] = json::array();
    for (const auto& fr : report.functions) {
        json fj;
        fj["name"] = fr.name;
        fj["status"] = statusText(fr.status);
        if (!fr.reason.empty())
            fj["reason"] = fr.reason;
        fj["gen_ms"] = fr.genMs;
        if (fr.contract)
            fj["contract"] = contractToJson(*fr.contract);
        if (fr.validated)
            fj["validation"] = validationToJson(fr.validation);
        j["functions"].push_back(std::move(fj));
    }
    return j.dump(2) + "\n";
}

CorpusReport runCorpus(const std::string& dir, const PipelineOptions& opts) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        std::string p = entry.path().string();
        if (p.size() > 2 && p.substr(p.size() - 2) == ".c" &&
            p.find(".annotated.c") == std::string::npos)
            files.push_back(p);
    }
    std::sort(files.begin(), files.end());

    CorpusReport report;
    report.files.resize(files.size());
    std::atomic<size_t> next{0};
    int jobs = std::max(1, opts.jobs);
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= files.size())
                return;
            try {
                report.files[i] = analyzeFile(files[i], opts);
            } catch (const std::exception& e) {
                // one file must never abort the batch
                report.files[i].path = files[i];
                report.files[i].error = e.what();
                report.files[i].exitCode = 3;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    std::vector<double> genTimes;
    for (const auto& f : report.files) {
        if (!f.parsed) {
            ++report.fail;
            continue;
        }
        for (const auto& fr : f.functions) {
            switch (fr.status) {
            case FnStatus::Full: ++report.full; break;
            case FnStatus::Partial: ++report.partial; break;
            case FnStatus::Fail: ++report.fail; break;
            case FnStatus::Timeout: ++report.timeout; break;
            }
            if (fr.contract)
                genTimes.push_back(fr.genMs);
        }
    }
    if (!genTimes.empty()) {
        double sum = 0;
        for (double t : genTimes)
            sum += t;
        report.avgGenMs = sum / static_cast<double>(genTimes.size());
        std::sort(genTimes.begin(), genTimes.end());
        report.medianGenMs = genTimes[genTimes.size() / 2];
    }
    return report;
}

std::string CorpusReport::table() const {
    std::ostringstream os;
    os << "file                          function          status   time_ms\n";
    os << "------------------------------------------------------------------\n";
    for (const auto& f : files) {
        std::string name = std::filesystem::path(f.path).filename().string();
        if (!f.parsed) {
            os << name << "  " << "-" << "  Fail(" << f.error << ")\n";
            continue;
        }
        for (const auto& fr : f.functions) {
            os << name;
            for (size_t i = name.size(); i < 30; ++i)
                os << ' ';
            os << fr.name;
            for (size_t i = fr.name.size(); i < 18; ++i)
                os << ' ';
            std::string st = statusText(fr.status);
            os << st;
            for (size_t i = st.size(); i < 9; ++i)
                os << ' ';
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", fr.genMs);
            os << buf << "\n";
        }
    }
    os << "------------------------------------------------------------------\n";
    os << "Full: " << full << "  Partial: " << partial << "  Fail: " << fail
       << "  Timeout: " << timeout << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "avg gen time: %.2f ms, median: %.2f ms\n", avgGenMs,
                  medianGenMs);
    os << buf;
    return os.str();
}

std::string CorpusReport::json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["summary"] = {{"full", full},
                    {"partial", partial},
                    {"fail", fail},
                    {"timeout", timeout},
                    {"avg_gen_ms", avgGenMs},
                    {"median_gen_ms", medianGenMs}};
    j["files"] = nlohmann::json::array();
    for (const auto& f : files)
        j["files"].push_back(nlohmann::json::parse(fileReportJson(f)));
    return j.dump(2) + "\n";
}

} // namespace arcs
