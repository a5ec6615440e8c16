#include "peff/kt.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace peff {

using nlohmann::json;

std::string KtCertificate::toJson() const {
    json j;
    j["target"] = target.toHexLen();
    j["condition"] = condition.toHexLen();
    j["program"] = program.code.toHexLen();
    j["time"] = time;
    j["level"] = level;
    j["exact"] = exact;
    j["machineVersion"] = machineVersion;
    return j.dump();
}

std::optional<KtCertificate> KtCertificate::fromJson(const std::string& line) {
    try {
        json j = json::parse(line);
        KtCertificate c;
        c.target = Bits::fromHexLen(j.at("target").get<std::string>());
        c.condition = Bits::fromHexLen(j.at("condition").get<std::string>());
        c.program = Program{Bits::fromHexLen(j.at("program").get<std::string>())};
        c.time = j.at("time").get<std::uint64_t>();
        c.level = j.at("level").get<int>();
        c.exact = j.at("exact").get<bool>();
        c.machineVersion = j.at("machineVersion").get<std::string>();
        return c;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

CertFailure verifyCertificate(const KtCertificate& c) {
    if (c.machineVersion != machineVersion()) return CertFailure::VersionMismatch;
    if (c.time < 1 || c.level != static_cast<int>(c.program.length()) + ceilLog2(c.time))
        return CertFailure::LevelMismatch;
    ExecOutcome out = run(c.program, c.condition, c.time);
    if (out.status != RunStatus::Halted) return CertFailure::NotHalted;
    if (out.output != c.target) return CertFailure::OutputMismatch;
    return CertFailure::Ok;
}

CertificateCache::CertificateCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cert = KtCertificate::fromJson(line);
        if (!cert) continue;
        std::string k = key(cert->machineVersion, cert->target, cert->condition);
        auto it = entries_.find(k);
        if (it == entries_.end() || cert->level < it->second.level || (cert->exact && !it->second.exact))
            entries_[k] = *cert;
    }
}

std::string CertificateCache::key(const std::string& version, const Bits& target, const Bits& condition) {
    return version + "|" + target.toHexLen() + "|" + condition.toHexLen();
}

const KtCertificate* CertificateCache::lookup(const Bits& target, const Bits& condition) const {
    auto it = entries_.find(key(machineVersion(), target, condition));
    return it == entries_.end() ? nullptr : &it->second;
}

void CertificateCache::store(const KtCertificate& cert) {
    std::string k = key(cert.machineVersion, cert.target, cert.condition);
    auto it = entries_.find(k);
    if (it != entries_.end() && it->second.exact && !cert.exact) return;
    if (it != entries_.end() && it->second.level <= cert.level && it->second.exact == cert.exact) return;
    entries_[k] = cert;
    pendingLines_.push_back(cert.toJson());
}

void CertificateCache::flush() {
    if (path_.empty() || pendingLines_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    for (const auto& line : pendingLines_) out << line << '\n';
    pendingLines_.clear();
}

namespace {

constexpr int kMaxBudget = 28;               // keeps 2^(i-|e|) runs materializable
constexpr std::uint64_t kHintTime = 1u << 28;

std::uint64_t witnessTime(const ExecOutcome& out) { return out.steps < 1 ? 1 : out.steps; }

}  // namespace

KtResult KtEngine::kt(const Bits& w, const Bits& u, int budget, const std::vector<Program>& hints) {
    if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
    if (budget > kMaxBudget) throw std::invalid_argument("level budget above enumeration guard");

    if (cache_) {
        const KtCertificate* hit = cache_->lookup(w, u);
        if (hit && hit->exact && hit->level <= budget) {
            return {*hit, hit->level - 1};
        }
    }

    for (int level = 0; level <= budget; ++level) {
        for (int len = 0; len <= level; ++len) {
            std::uint64_t t = 1ULL << (level - len);
            ProgramEnumerator en(static_cast<std::size_t>(len));
            en.seekLength(static_cast<std::size_t>(len));
            Program e;
            while (en.next(e)) {
                ExecOutcome out = run(e, u, t);
                enumerationSteps_ += out.steps + 1;
                if (out.status == RunStatus::Halted && out.output == w) {
                    KtCertificate cert;
                    cert.target = w;
                    cert.condition = u;
                    cert.program = e;
                    cert.time = witnessTime(out);
                    cert.level = len + ceilLog2(cert.time);
                    cert.exact = true;
                    cert.machineVersion = machineVersion();
                    // A smaller halting time would have surfaced in an earlier round.
                    if (cert.level != level) throw std::logic_error("level accounting out of sync");
                    if (cache_) cache_->store(cert);
                    return {cert, level - 1};
                }
            }
        }
    }

    // Upper-bound fallback: the print witness and any caller-provided ones.
    KtCertificate best;
    bool haveBest = false;
    auto consider = [&](const Program& e, const ExecOutcome& out) {
        if (out.status != RunStatus::Halted || !(out.output == w)) return;
        KtCertificate cert;
        cert.target = w;
        cert.condition = u;
        cert.program = e;
        cert.time = witnessTime(out);
        cert.level = static_cast<int>(e.length()) + ceilLog2(cert.time);
        cert.exact = false;
        cert.machineVersion = machineVersion();
        if (!haveBest || cert.level < best.level ||
            (cert.level == best.level && Bits::lengthLexLess(cert.program.code, best.program.code))) {
            best = cert;
            haveBest = true;
        }
    };
    Program printer = printProgramFor(w);
    consider(printer, run(printer, u, w.size() + 2));
    for (const auto& hint : hints) consider(hint, run(hint, u, kHintTime));
    if (!haveBest) throw std::logic_error("print witness failed");
    if (cache_) cache_->store(best);
    return {best, budget};
}

ItValue KtEngine::itInfo(const Bits& u, const Bits& w, int budget) {
    KtResult plain = kt(w, Bits{}, budget);
    KtResult conditioned = kt(w, u, budget);
    ItValue v;
    v.ktW = plain.certificate.level;
    v.ktWU = conditioned.certificate.level;
    v.value = static_cast<long long>(v.ktW) - v.ktWU;
    v.exact = plain.exact() && conditioned.exact();
    return v;
}

KtCertificate composeCertificates(const KtCertificate& first, const KtCertificate& second) {
    if (!(first.target == second.condition))
        throw std::invalid_argument("stage-1 output does not match stage-2 condition");
    if (first.machineVersion != machineVersion() || second.machineVersion != machineVersion())
        throw std::invalid_argument("certificate from a different machine version");
    if (verifyCertificate(first) != CertFailure::Ok || verifyCertificate(second) != CertFailure::Ok)
        throw std::invalid_argument("certificate does not re-execute");

    Program composed = composePrograms(first.program, second.program);
    std::uint64_t t = first.time + second.time;
    ExecOutcome out = run(composed, first.condition, t);
    if (out.status != RunStatus::Halted || !(out.output == second.target))
        throw std::logic_error("composed program failed to re-execute");

    KtCertificate cert;
    cert.target = second.target;
    cert.condition = first.condition;
    cert.program = composed;
    cert.time = witnessTime(out);
    cert.level = static_cast<int>(composed.length()) + ceilLog2(cert.time);
    cert.exact = false;
    cert.machineVersion = machineVersion();
    return cert;
}

}  // namespace peff
