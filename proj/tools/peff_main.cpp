// Command line surface: generate corpora, measure proof sizes and information
// levels, run the universal searchers, compute program-length certificates and
// re-verify persisted reports.
//
// Exit codes: 0 ok, 1 usage/configuration error, 2 budget exhausted (bounds
// reported), 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "peff/bench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitVerify = 3;

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

peff::Bits parseTarget(const std::string& spec) {
    if (spec.rfind("hex:", 0) == 0) return peff::Bits::fromHexLen(spec.substr(4));
    if (spec.rfind("bits:", 0) == 0) return peff::Bits::fromString(spec.substr(5));
    return peff::Bits::fromAscii(spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proof search information-efficiency workbench"};
    app.require_subcommand(1);

    peff::FamilyRegistry registry;
    peff::registerBuiltinFamilies(registry);

    // gen
    auto* gen = app.add_subcommand("gen", "write formula family instances to disk");
    std::string genFamily = "php", genOut = "corpus";
    int genFrom = 1, genTo = 4;
    gen->add_option("family", genFamily, "family tag (php, orchain)");
    gen->add_option("--from", genFrom, "first instance");
    gen->add_option("--to", genTo, "last instance");
    gen->add_option("--out", genOut, "output directory");

    // measure
    auto* measure = app.add_subcommand("measure", "run the measurement pipeline over a corpus");
    std::string measureConfig, measureOut = "report";
    measure->add_option("--config", measureConfig, "config JSON path")->required();
    measure->add_option("--out", measureOut, "output stem (<stem>.json, <stem>.csv)");
    std::string measureCache = "";
    measure->add_option("--cache", measureCache, "certificate cache path (JSON lines)");

    // verify
    auto* verifyCmd = app.add_subcommand("verify", "re-check a persisted report");
    std::string verifyReport, verifyCache = "";
    verifyCmd->add_option("--report", verifyReport, "report JSON path")->required();
    verifyCmd->add_option("--cache", verifyCache, "certificate cache path");

    // kt
    auto* ktCmd = app.add_subcommand("kt", "program-length certificate for a bit string");
    std::string ktTarget, ktCondition = "";
    int ktBudget = 14;
    ktCmd->add_option("target", ktTarget, "ascii text, or hex:<len>:<hex>, or bits:<01..>")->required();
    ktCmd->add_option("--given", ktCondition, "conditioning string (same syntax)");
    ktCmd->add_option("--budget", ktBudget, "level budget");

    // ip
    auto* ipCmd = app.add_subcommand("ip", "information efficiency of a tautology");
    std::string ipFormula, ipSystem = "Res";
    int infoLevelCap = 18;
    ipCmd->add_option("formula", ipFormula, "formula text")->required();
    ipCmd->add_option("--system", ipSystem, "proof system name");
    ipCmd->add_option("--level-cap", infoLevelCap, "search level cap");

    // search
    auto* searchCmd = app.add_subcommand("search", "run a universal proof search");
    std::string searchFormula, searchSystem = "Res", searchAlgo = "level";
    int searchLevelCap = 18;
    std::uint64_t searchStepCap = 50'000'000;
    searchCmd->add_option("formula", searchFormula, "formula text")->required();
    searchCmd->add_option("--system", searchSystem, "proof system name");
    searchCmd->add_option("--algo", searchAlgo, "dovetail or level");
    searchCmd->add_option("--level-cap", searchLevelCap, "bp level cap");
    searchCmd->add_option("--step-cap", searchStepCap, "ap host step cap");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto result = peff::runGen(genFamily, genFrom, genTo, genOut, registry);
            for (const auto& f : result.files) std::cout << f << '\n';
            return kExitOk;
        }
        if (measure->parsed()) {
            peff::BenchConfig config = peff::BenchConfig::fromJson(readFile(measureConfig));
            peff::CertificateCache cache(measureCache.empty() ? measureOut + ".cache.jsonl" : measureCache);
            peff::BenchReport report = peff::runMeasure(config, registry, &cache);
            writeFile(measureOut + ".json", report.toJson() + "\n");
            writeFile(measureOut + ".csv", report.toCsv());
            std::cout << "rows: " << report.rows.size() << '\n';
            return kExitOk;
        }
        if (verifyCmd->parsed()) {
            peff::BenchReport report = peff::BenchReport::fromJson(readFile(verifyReport));
            std::optional<peff::CertificateCache> cache;
            if (!verifyCache.empty()) cache.emplace(verifyCache);
            auto results = peff::runVerify(report, registry, cache ? &*cache : nullptr);
            bool allOk = true;
            for (const auto& r : results) {
                std::cout << r.id << ',' << r.system << ',' << (r.ok ? "pass" : "FAIL") << ',' << r.reason
                          << '\n';
                allOk = allOk && r.ok;
            }
            return allOk ? kExitOk : kExitVerify;
        }
        if (ktCmd->parsed()) {
            peff::KtEngine engine;
            peff::KtResult result =
                engine.kt(parseTarget(ktTarget), ktCondition.empty() ? peff::Bits{} : parseTarget(ktCondition),
                          ktBudget);
            std::cout << result.certificate.toJson() << '\n';
            return result.exact() ? kExitOk : kExitBudget;
        }
        if (ipCmd->parsed()) {
            auto system = peff::ProofSystemId::parseName(ipSystem);
            if (!system) {
                std::cerr << "unknown proof system: " << ipSystem << '\n';
                return kExitUsage;
            }
            peff::VerifierContext ctx;
            ctx.families = &registry;
            peff::Formula tau = peff::Formula::parse(ipFormula);
            peff::EfficiencyResult result = peff::informationEfficiency(*system, tau, infoLevelCap, ctx);
            std::cout << (result.exact ? "exact " : "lower-bound ") << result.level << '\n';
            return result.exact ? kExitOk : kExitBudget;
        }
        if (searchCmd->parsed()) {
            auto system = peff::ProofSystemId::parseName(searchSystem);
            if (!system) {
                std::cerr << "unknown proof system: " << searchSystem << '\n';
                return kExitUsage;
            }
            peff::VerifierContext ctx;
            ctx.families = &registry;
            peff::Formula tau = peff::Formula::parse(searchFormula);
            peff::SearchOutcome outcome;
            if (searchAlgo == "dovetail" || searchAlgo == "ap")
                outcome = peff::runDovetailSearch(*system, tau, searchStepCap, ctx);
            else if (searchAlgo == "level" || searchAlgo == "bp")
                outcome = peff::runLevelSearch(*system, tau, searchLevelCap, ctx);
            else {
                std::cerr << "unknown algorithm: " << searchAlgo << '\n';
                return kExitUsage;
            }
            std::cout << peff::searchReportJson(searchAlgo, *system, tau, outcome, searchLevelCap,
                                                searchStepCap)
                      << '\n';
            return outcome.found() ? kExitOk : kExitBudget;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
