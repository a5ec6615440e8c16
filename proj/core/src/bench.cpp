#include "peff/bench.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace peff {

using nlohmann::json;

std::string BenchConfig::toJson() const {
    json j;
    j["corpus"] = json::array();
    for (const auto& fr : corpus) j["corpus"].push_back({{"tag", fr.tag}, {"from", fr.from}, {"to", fr.to}});
    j["systems"] = systems;
    j["budgets"] = {{"levelCap", budgets.levelCap},
                    {"stepCap", budgets.stepCap},
                    {"capBits", budgets.capBits},
                    {"ktBudget", budgets.ktBudget},
                    {"spMaxStates", budgets.spMaxStates}};
    j["filter"] = filter;
    j["machineVersionPin"] = machineVersionPin;
    return j.dump(2);
}

BenchConfig BenchConfig::fromJson(const std::string& text) {
    json j = json::parse(text);
    BenchConfig c;
    for (const auto& fr : j.value("corpus", json::array()))
        c.corpus.push_back({fr.at("tag").get<std::string>(), fr.value("from", 1), fr.value("to", 1)});
    c.systems = j.value("systems", std::vector<std::string>{"TT", "Res"});
    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        c.budgets.levelCap = b.value("levelCap", c.budgets.levelCap);
        c.budgets.stepCap = b.value("stepCap", c.budgets.stepCap);
        c.budgets.capBits = b.value("capBits", c.budgets.capBits);
        c.budgets.ktBudget = b.value("ktBudget", c.budgets.ktBudget);
        c.budgets.spMaxStates = b.value("spMaxStates", c.budgets.spMaxStates);
    }
    c.filter = j.value("filter", false);
    c.machineVersionPin = j.value("machineVersionPin", std::string{});
    if (c.budgets.levelCap < 0 || c.budgets.stepCap == 0 || c.budgets.ktBudget < 0)
        throw std::invalid_argument("budgets must be positive");
    return c;
}

namespace {

json rowToJson(const BenchRow& r) {
    json j;
    j["id"] = r.id;
    j["tauRender"] = r.tauRender;
    j["tauBits"] = r.tauBits;
    j["system"] = r.system;
    j["sP"] = {{"exact", r.spExactFlag}, {"bits", r.spBits}, {"lower", r.spLower}, {"upper", r.spUpper}};
    j["iP"] = {{"exact", r.infoExact}, {"level", r.infoLevel}};
    j["proof"] = r.proofHex;
    j["stepsDovetail"] = r.stepsDovetail;
    j["dovetailFound"] = r.dovetailFound;
    j["stepsLevel"] = r.stepsLevel;
    j["kt"] = {{"exact", r.ktExact}, {"level", r.ktLevel}};
    j["filter"] = r.filterVerdict;
    return j;
}

BenchRow rowFromJson(const json& j) {
    BenchRow r;
    r.id = j.at("id").get<std::string>();
    r.tauRender = j.at("tauRender").get<std::string>();
    r.tauBits = j.at("tauBits").get<std::uint64_t>();
    r.system = j.at("system").get<std::string>();
    r.spExactFlag = j.at("sP").at("exact").get<bool>();
    r.spBits = j.at("sP").at("bits").get<std::uint64_t>();
    r.spLower = j.at("sP").at("lower").get<std::uint64_t>();
    r.spUpper = j.at("sP").at("upper").get<std::uint64_t>();
    r.infoExact = j.at("iP").at("exact").get<bool>();
    r.infoLevel = j.at("iP").at("level").get<int>();
    r.proofHex = j.at("proof").get<std::string>();
    r.stepsDovetail = j.at("stepsDovetail").get<std::uint64_t>();
    r.dovetailFound = j.at("dovetailFound").get<bool>();
    r.stepsLevel = j.at("stepsLevel").get<std::uint64_t>();
    r.ktExact = j.at("kt").at("exact").get<bool>();
    r.ktLevel = j.at("kt").at("level").get<int>();
    r.filterVerdict = j.at("filter").get<std::string>();
    return r;
}

}  // namespace

std::string BenchReport::toJson() const {
    json j;
    j["schemaVersion"] = schemaVersion;
    j["machineVersion"] = machineVersion;
    j["encodingVersion"] = encodingVersion;
    j["config"] = json::parse(config.toJson());
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(rowToJson(r));
    j["levelFit"] = {{"coefficient", levelFit.coefficient}, {"exponent", levelFit.exponent}};
    return j.dump(2);
}

BenchReport BenchReport::fromJson(const std::string& text) {
    json j = json::parse(text);
    BenchReport report;
    report.schemaVersion = j.at("schemaVersion").get<int>();
    report.machineVersion = j.at("machineVersion").get<std::string>();
    report.encodingVersion = j.at("encodingVersion").get<std::string>();
    report.config = BenchConfig::fromJson(j.at("config").dump());
    for (const auto& r : j.at("rows")) report.rows.push_back(rowFromJson(r));
    report.levelFit.coefficient = j.at("levelFit").at("coefficient").get<double>();
    report.levelFit.exponent = j.at("levelFit").at("exponent").get<double>();
    return report;
}

std::string BenchReport::toCsv() const {
    std::ostringstream out;
    out << "id,tauBits,system,sPExact,sPBits,sPLower,sPUpper,iPExact,iPLevel,stepsDovetail,dovetailFound,stepsLevel,"
           "ktExact,ktLevel,filter\n";
    for (const auto& r : rows) {
        out << r.id << ',' << r.tauBits << ',' << r.system << ',' << (r.spExactFlag ? 1 : 0) << ','
            << r.spBits << ',' << r.spLower << ',' << r.spUpper << ',' << (r.infoExact ? 1 : 0) << ','
            << r.infoLevel << ',' << r.stepsDovetail << ',' << (r.dovetailFound ? 1 : 0) << ',' << r.stepsLevel << ','
            << (r.ktExact ? 1 : 0) << ',' << r.ktLevel << ',' << r.filterVerdict << '\n';
    }
    return out.str();
}

std::vector<std::pair<std::string, Formula>> resolveCorpus(const BenchConfig& config,
                                                           const FamilyRegistry& registry) {
    std::vector<std::pair<std::string, Formula>> out;
    for (const auto& fr : config.corpus) {
        if (fr.tag == "toy") {
            auto suite = toyTautologySuite();
            int from = std::max(1, fr.from);
            int to = std::min<int>(static_cast<int>(suite.size()), fr.to);
            for (int n = from; n <= to; ++n)
                out.push_back({"toy_" + std::to_string(n), suite[static_cast<std::size_t>(n) - 1]});
            continue;
        }
        const FamilySpec* fam = registry.find(fr.tag);
        if (!fam) throw std::invalid_argument("unknown family tag: " + fr.tag);
        for (int n = std::max(1, fr.from); n <= std::min(fr.to, fam->maxIndex); ++n)
            out.push_back({fr.tag + "_" + std::to_string(n), fam->instance(n)});
    }
    return out;
}

Program familySeedProgram(const FamilySpec& family, int n) {
    std::string source = family.seedSource;
    const std::string placeholder = "<n>";
    std::size_t pos;
    while ((pos = source.find(placeholder)) != std::string::npos)
        source.replace(pos, placeholder.size(), std::to_string(n));
    return assemble(source);
}

GenResult runGen(const std::string& familyTag, int from, int to, const std::string& outDir,
                 const FamilyRegistry& registry) {
    namespace fs = std::filesystem;
    const FamilySpec* fam = registry.find(familyTag);
    if (!fam) throw std::invalid_argument("unknown family tag: " + familyTag);
    fs::create_directories(outDir);
    GenResult result;
    json meta;
    meta["family"] = familyTag;
    meta["machineVersion"] = machineVersion();
    meta["instances"] = json::array();
    for (int n = from; n <= to && n <= fam->maxIndex; ++n) {
        Formula tau = fam->instance(n);
        std::string stem = familyTag + "_" + std::to_string(n);
        std::string tautPath = (fs::path(outDir) / (stem + ".taut")).string();
        {
            std::ofstream f(tautPath);
            f << tau.render() << '\n';
        }
        result.files.push_back(tautPath);
        std::string cnfPath = (fs::path(outDir) / (stem + ".cnf")).string();
        {
            std::ofstream f(cnfPath);
            f << toDimacs(familyTag == "php" ? genPhp(n) : negateToCnf(tau));
        }
        result.files.push_back(cnfPath);
        meta["instances"].push_back({{"id", stem},
                                     {"n", n},
                                     {"tauBits", tau.sizeBits()},
                                     {"seedSource", fam->seedSource},
                                     {"seedProgram", familySeedProgram(*fam, n).code.toHexLen()}});
    }
    std::string metaPath = (fs::path(outDir) / (familyTag + "_corpus.json")).string();
    {
        std::ofstream f(metaPath);
        f << meta.dump(2) << '\n';
    }
    result.files.push_back(metaPath);
    return result;
}

BenchReport runMeasure(const BenchConfig& config, const FamilyRegistry& registry, CertificateCache* cache) {
    if (!config.machineVersionPin.empty() && config.machineVersionPin != machineVersion())
        throw std::invalid_argument("config pins machine version " + config.machineVersionPin +
                                    " but this build is " + machineVersion());

    BenchReport report;
    report.machineVersion = machineVersion();
    report.encodingVersion = kProofEncodingVersion;
    report.config = config;

    VerifierContext ctx;
    ctx.families = &registry;

    KtEngine engine(cache);
    auto corpus = resolveCorpus(config, registry);
    std::vector<FitSample> levelSamples;

    for (const auto& [id, tau] : corpus) {
        // Family seed programs back compressibility certificates for uniform instances.
        std::vector<Program> hints;
        auto underscore = id.rfind('_');
        std::string tag = id.substr(0, underscore);
        int n = std::stoi(id.substr(underscore + 1));
        if (const FamilySpec* fam = registry.find(tag)) hints.push_back(familySeedProgram(*fam, n));

        Bits tauBitsValue = Bits::fromAscii(tau.render());
        KtResult tauKt = engine.kt(tauBitsValue, Bits{}, config.budgets.ktBudget, hints);

        std::string filterVerdict = "off";
        if (config.filter) {
            FilterResult fr = uniformityFilter(engine, tau, config.budgets.ktBudget, hints);
            filterVerdict = fr.verdict == FilterVerdict::Fail ? "fail"
                            : fr.verdict == FilterVerdict::Pass ? "pass"
                                                                : "pass-unconfirmed";
        }

        for (const auto& systemName : config.systems) {
            auto system = ProofSystemId::parseName(systemName);
            if (!system) throw std::invalid_argument("unknown proof system: " + systemName);

            BenchRow row;
            row.id = id;
            row.tauRender = tau.render();
            row.tauBits = tau.sizeBits();
            row.system = systemName;
            row.ktLevel = tauKt.certificate.level;
            row.ktExact = tauKt.exact();
            row.filterVerdict = filterVerdict;

            SpOptions spOpts;
            spOpts.capBits = config.budgets.capBits;
            spOpts.maxStates = config.budgets.spMaxStates;
            SpResult sp = spExact(*system, tau, spOpts, ctx);
            row.spExactFlag = sp.exact();
            row.spBits = sp.bits;
            row.spLower = sp.lowerBound;
            row.spUpper = sp.upperBound;

            SearchOutcome bp = runLevelSearch(*system, tau, config.budgets.levelCap, ctx);
            row.infoLevel = bp.level;
            row.infoExact = bp.found();
            row.stepsLevel = bp.hostSteps;
            if (bp.found()) {
                row.proofHex = bp.proof.toHexLen();
                levelSamples.push_back({bp.hostSteps, bp.level, row.tauBits});
            }

            SearchOutcome ap = runDovetailSearch(*system, tau, config.budgets.stepCap, ctx);
            row.stepsDovetail = ap.hostSteps;
            row.dovetailFound = ap.found();

            report.rows.push_back(std::move(row));
        }
    }
    report.levelFit = fitStepLaw(levelSamples);
    if (cache) cache->flush();
    return report;
}

std::vector<VerifyRowResult> runVerify(const BenchReport& report, const FamilyRegistry& registry,
                                       const CertificateCache* cache) {
    std::vector<VerifyRowResult> results;
    VerifierContext ctx;
    ctx.families = &registry;
    for (const auto& row : report.rows) {
        VerifyRowResult r;
        r.id = row.id;
        r.system = row.system;
        if (report.machineVersion != machineVersion()) {
            r.reason = "version";
            results.push_back(r);
            continue;
        }
        auto system = ProofSystemId::parseName(row.system);
        if (!system) {
            r.reason = "system";
            results.push_back(r);
            continue;
        }
        Formula tau = Formula::parse(row.tauRender);
        if (row.infoExact) {
            try {
                Bits proof = Bits::fromHexLen(row.proofHex);
                VerifyResult v = verify(*system, proof, ctx);
                if (!v.accepted() || !v.formula->identical(tau)) {
                    r.reason = "proof";
                    results.push_back(r);
                    continue;
                }
            } catch (const std::exception&) {
                r.reason = "proof";
                results.push_back(r);
                continue;
            }
        }
        if (cache) {
            const KtCertificate* cert = cache->lookup(Bits::fromAscii(row.tauRender), Bits{});
            if (!cert || verifyCertificate(*cert) != CertFailure::Ok ||
                cert->level != row.ktLevel) {
                r.reason = "certificate";
                results.push_back(r);
                continue;
            }
        }
        r.ok = true;
        r.reason = "ok";
        results.push_back(r);
    }
    return results;
}

std::string searchReportJson(const std::string& algo, const ProofSystemId& system, const Formula& tau,
                             const SearchOutcome& outcome, int levelCap, std::uint64_t stepCap) {
    json j;
    j["schemaVersion"] = kReportSchemaVersion;
    j["machineVersion"] = machineVersion();
    j["encodingVersion"] = kProofEncodingVersion;
    j["algo"] = algo;
    j["system"] = system.name();
    j["formula"] = tau.render();
    j["found"] = outcome.found();
    j["level"] = outcome.level;
    j["rounds"] = outcome.rounds;
    j["hostSteps"] = outcome.hostSteps;
    j["proof"] = outcome.found() ? outcome.proof.toHexLen() : "";
    j["caps"] = {{"levelCap", levelCap}, {"stepCap", stepCap}};
    return j.dump(2);
}

}  // namespace peff
