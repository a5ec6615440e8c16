#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peff/bits.hpp"
#include "peff/machine.hpp"

namespace peff {

/// A checked witness that `program` run on `condition` for `time` steps halts
/// with output `target`, placing the program-plus-time level |e| + ceil(log2 t)
/// at `level`. When exact is set, no witness of smaller level exists: every
/// level below was searched exhaustively.
struct KtCertificate {
    Bits target;
    Bits condition;
    Program program;
    std::uint64_t time = 1;
    int level = 0;
    bool exact = false;
    std::string machineVersion;

    std::string toJson() const;
    static std::optional<KtCertificate> fromJson(const std::string& line);
};

enum class CertFailure { Ok, NotHalted, OutputMismatch, LevelMismatch, VersionMismatch };

/// Re-runs the witness against the current machine.
CertFailure verifyCertificate(const KtCertificate& c);

struct KtResult {
    KtCertificate certificate;  // exact minimum or the best known upper bound
    int searchedUpTo = -1;      // all levels <= this were exhausted
    bool exact() const { return certificate.exact; }
    /// Largest level proven impossible plus one, i.e. a lower bound on the true value.
    int provenLowerBound() const { return certificate.exact ? certificate.level : searchedUpTo + 1; }
};

struct ItValue {
    long long value = 0;  // ktW - ktWU
    int ktW = 0;
    int ktWU = 0;
    bool exact = false;
};

/// Append-only JSON-lines store of best-known certificates, keyed by
/// (machine version, target, condition). Rewrites are idempotent because the
/// search is deterministic.
class CertificateCache {
public:
    CertificateCache() = default;
    explicit CertificateCache(std::string path);

    const KtCertificate* lookup(const Bits& target, const Bits& condition) const;
    void store(const KtCertificate& cert);
    std::size_t size() const { return entries_.size(); }
    void flush();

private:
    std::string path_;
    std::map<std::string, KtCertificate> entries_;
    std::vector<std::string> pendingLines_;
    static std::string key(const std::string& version, const Bits& target, const Bits& condition);
};

class KtEngine {
public:
    KtEngine() = default;
    explicit KtEngine(CertificateCache* cache) : cache_(cache) {}

    /// Levin complexity by level-ordered enumeration: for i = 0..budget, all
    /// programs of length l <= i run for t = 2^(i-l) steps (larger t only
    /// raises the level, so the maximal representative per level suffices).
    /// Found: the minimum-level certificate, ties broken by shorter program,
    /// then lexicographic program order, then least time; exact is set.
    /// Not found: the best upper bound among the print program and the given
    /// hint programs, with exact unset.
    KtResult kt(const Bits& w, const Bits& u, int budget, const std::vector<Program>& hints = {});

    /// Kt(w) - Kt(w|u) with the empty condition standing for no condition.
    ItValue itInfo(const Bits& u, const Bits& w, int budget);

    std::uint64_t enumerationSteps() const { return enumerationSteps_; }

private:
    CertificateCache* cache_ = nullptr;
    std::uint64_t enumerationSteps_ = 0;
};

/// Joins a certificate for v from u with one for w from v into a certificate
/// for w from u, via the pairing program. The result re-executes and its level
/// is at most first.level + second.level + 2*ceil(log2(first.level+1)) + cComp.
/// Throws std::invalid_argument when first.target != second.condition.
KtCertificate composeCertificates(const KtCertificate& first, const KtCertificate& second);

}  // namespace peff
