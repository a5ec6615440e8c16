#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "peff/bench.hpp"

using namespace peff;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

BenchConfig tinyConfig() {
    BenchConfig config;
    config.corpus = {{"toy", 1, 3}};
    config.systems = {"TT", "Res"};
    config.budgets.levelCap = 15;
    config.budgets.ktBudget = 10;
    config.budgets.stepCap = 20'000'000;
    return config;
}

}  // namespace

TEST_CASE("config json round-trip") {
    BenchConfig config = tinyConfig();
    config.filter = true;
    config.machineVersionPin = machineVersion();
    BenchConfig back = BenchConfig::fromJson(config.toJson());
    CHECK(back.toJson() == config.toJson());
    CHECK_THROWS(BenchConfig::fromJson(R"({"budgets":{"stepCap":0}})"));
}

TEST_CASE("corpus resolution is deterministic and tagged") {
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    BenchConfig config;
    config.corpus = {{"toy", 1, 2}, {"php", 1, 2}};
    auto corpus = resolveCorpus(config, registry);
    REQUIRE(corpus.size() == 4);
    CHECK(corpus[0].first == "toy_1");
    CHECK(corpus[2].first == "php_1");
    CHECK(corpus[3].second.identical(phpTautology(2)));
}

TEST_CASE("family seed programs print their instances") {
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    for (const char* tag : {"php", "orchain"}) {
        const FamilySpec* fam = registry.find(tag);
        REQUIRE(fam != nullptr);
        for (int n : {1, 3}) {
            Program seed = familySeedProgram(*fam, n);
            ExecOutcome out = run(seed, Bits{}, 1 << 22);
            REQUIRE(out.status == RunStatus::Halted);
            CHECK(out.output == Bits::fromAscii(fam->instance(n).render()));
        }
    }
}

TEST_CASE("gen writes deterministic corpus files") {
    namespace fs = std::filesystem;
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    fs::remove_all("gen_test_a");
    fs::remove_all("gen_test_b");
    GenResult a = runGen("php", 1, 3, "gen_test_a", registry);
    GenResult b = runGen("php", 1, 3, "gen_test_b", registry);
    REQUIRE(a.files.size() == b.files.size());
    REQUIRE(a.files.size() == 7);  // 3 x (taut + cnf) + metadata
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        std::string ca = slurp(a.files[i]);
        std::string cb = slurp(b.files[i]);
        CHECK(ca == cb);
    }
    // The DIMACS file holds the pigeonhole clause set.
    Cnf parsed = fromDimacs(slurp("gen_test_a/php_2.cnf"));
    CHECK(parsed == genPhp(2));
    CHECK_THROWS(runGen("nosuch", 1, 2, "gen_test_a", registry));
    fs::remove_all("gen_test_a");
    fs::remove_all("gen_test_b");
}

TEST_CASE("measure produces rows and a cached rerun is identical") {
    namespace fs = std::filesystem;
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    std::string cachePath = "bench_cache_test.jsonl";
    std::remove(cachePath.c_str());
    BenchConfig config = tinyConfig();

    std::string first, second;
    {
        CertificateCache cache(cachePath);
        BenchReport report = runMeasure(config, registry, &cache);
        REQUIRE(report.rows.size() == 6);
        for (const auto& row : report.rows) {
            CHECK(row.infoExact);
            CHECK(row.infoLevel > 0);
            if (row.spExactFlag && row.infoExact) CHECK(row.infoLevel >= ceilLog2(row.spBits));
        }
        first = report.toJson();
        CHECK(report.toCsv().find("toy_1") != std::string::npos);
    }
    {
        CertificateCache cache(cachePath);
        BenchReport report = runMeasure(config, registry, &cache);
        second = report.toJson();
    }
    CHECK(first == second);
    std::remove(cachePath.c_str());
}

TEST_CASE("measure honors the version pin") {
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    BenchConfig config = tinyConfig();
    config.machineVersionPin = "not-this-machine";
    CHECK_THROWS(runMeasure(config, registry, nullptr));
}

TEST_CASE("verify passes a fresh report and flags corruption") {
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    std::string cachePath = "bench_cache_verify.jsonl";
    std::remove(cachePath.c_str());
    CertificateCache cache(cachePath);
    BenchConfig config = tinyConfig();
    BenchReport report = runMeasure(config, registry, &cache);

    auto results = runVerify(report, registry, &cache);
    REQUIRE(results.size() == report.rows.size());
    for (const auto& r : results) CHECK(r.ok);

    BenchReport corrupted = report;
    REQUIRE(corrupted.rows[2].infoExact);
    std::string hex = corrupted.rows[2].proofHex;
    hex[hex.size() - 1] = hex.back() == '0' ? '1' : '0';
    corrupted.rows[2].proofHex = hex;
    auto corruptedResults = runVerify(corrupted, registry, &cache);
    int failures = 0;
    for (std::size_t i = 0; i < corruptedResults.size(); ++i) {
        if (!corruptedResults[i].ok) {
            ++failures;
            CHECK(i == 2);
            CHECK(corruptedResults[i].reason == "proof");
        }
    }
    CHECK(failures == 1);

    BenchReport stale = report;
    stale.machineVersion = "older-machine";
    auto staleResults = runVerify(stale, registry, &cache);
    for (const auto& r : staleResults) {
        CHECK_FALSE(r.ok);
        CHECK(r.reason == "version");
    }
    std::remove(cachePath.c_str());
}

TEST_CASE("report json round-trip") {
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    BenchConfig config = tinyConfig();
    config.corpus = {{"toy", 1, 1}};
    config.systems = {"TT"};
    BenchReport report = runMeasure(config, registry, nullptr);
    BenchReport back = BenchReport::fromJson(report.toJson());
    CHECK(back.toJson() == report.toJson());
}

TEST_CASE("search report json") {
    Formula tau = Formula::parse("(x1 | ~x1)");
    SearchOutcome out = runLevelSearch(ProofSystemId::tt(), tau, 15);
    REQUIRE(out.found());
    std::string j = searchReportJson("level", ProofSystemId::tt(), tau, out, 15, 0);
    CHECK(j.find("\"found\": true") != std::string::npos);
    CHECK(j.find(machineVersion()) != std::string::npos);
}

TEST_CASE("corpus metadata seeds back real certificates") {
    namespace fs = std::filesystem;
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    fs::remove_all("gen_meta_test");
    runGen("php", 2, 2, "gen_meta_test", registry);
    std::string meta = slurp("gen_meta_test/php_corpus.json");
    auto hexPos = meta.find("\"seedProgram\": \"");
    REQUIRE(hexPos != std::string::npos);
    hexPos += 16;
    std::string hex = meta.substr(hexPos, meta.find('"', hexPos) - hexPos);
    Program seed{Bits::fromHexLen(hex)};
    std::string taut = slurp("gen_meta_test/php_2.taut");
    taut.pop_back();  // trailing newline
    KtEngine engine;
    KtResult cert = engine.kt(Bits::fromAscii(taut), Bits{}, 0, {seed});
    CHECK(verifyCertificate(cert.certificate) == CertFailure::Ok);
    CHECK(cert.certificate.program == seed);
    fs::remove_all("gen_meta_test");
}
