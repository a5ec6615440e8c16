#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peff/family.hpp"
#include "peff/formula.hpp"
#include "peff/generators.hpp"
#include "peff/kt.hpp"
#include "peff/proofs.hpp"
#include "peff/search.hpp"

namespace peff {

inline constexpr int kReportSchemaVersion = 1;

struct BenchBudgets {
    int levelCap = 16;
    std::uint64_t stepCap = 20'000'000;
    std::uint64_t capBits = 1 << 14;
    int ktBudget = 14;
    std::uint64_t spMaxStates = 20'000;  // node guard for the exact-size search
};

struct BenchConfig {
    struct FamilyRange {
        std::string tag;  // "toy", "php", "orchain"
        int from = 1;
        int to = 1;
    };
    std::vector<FamilyRange> corpus;
    std::vector<std::string> systems;
    BenchBudgets budgets;
    bool filter = false;
    std::string machineVersionPin;  // empty = current

    static BenchConfig fromJson(const std::string& text);
    std::string toJson() const;
};

struct BenchRow {
    std::string id;
    std::string tauRender;
    std::uint64_t tauBits = 0;
    std::string system;

    bool spExactFlag = false;
    std::uint64_t spBits = 0;      // exact value when spExactFlag
    std::uint64_t spLower = 0;     // bounds otherwise
    std::uint64_t spUpper = 0;

    int infoLevel = -1;
    bool infoExact = false;
    std::string proofHex;  // accepted proof found by the level search

    std::uint64_t stepsDovetail = 0;
    bool dovetailFound = false;
    std::uint64_t stepsLevel = 0;

    int ktLevel = -1;
    bool ktExact = false;

    std::string filterVerdict = "off";
};

struct BenchReport {
    int schemaVersion = kReportSchemaVersion;
    std::string machineVersion;
    std::string encodingVersion;
    BenchConfig config;
    std::vector<BenchRow> rows;
    PowerFit levelFit{0.0, 0.0};

    std::string toJson() const;
    static BenchReport fromJson(const std::string& text);
    std::string toCsv() const;
};

/// The corpus a config names, in deterministic order. Instance ids are
/// "<tag>_<n>".
std::vector<std::pair<std::string, Formula>> resolveCorpus(const BenchConfig& config,
                                                           const FamilyRegistry& registry);

/// Seed program printing the rendering of instance n, assembled from the
/// family's seed source.
Program familySeedProgram(const FamilySpec& family, int n);

struct GenResult {
    std::vector<std::string> files;
};

/// Writes per-instance formula renderings and DIMACS clause files plus a
/// corpus metadata record; deterministic for a fixed family and range.
GenResult runGen(const std::string& familyTag, int from, int to, const std::string& outDir,
                 const FamilyRegistry& registry);

BenchReport runMeasure(const BenchConfig& config, const FamilyRegistry& registry, CertificateCache* cache);

struct VerifyRowResult {
    std::string id;
    std::string system;
    bool ok = false;
    std::string reason;  // "ok", "version", "proof", "certificate", ...
};

std::vector<VerifyRowResult> runVerify(const BenchReport& report, const FamilyRegistry& registry,
                                       const CertificateCache* cache);

std::string searchReportJson(const std::string& algo, const ProofSystemId& system, const Formula& tau,
                             const SearchOutcome& outcome, int levelCap, std::uint64_t stepCap);

}  // namespace peff
