#include <doctest.h>

#include <cstdio>
#include <random>
#include <stdexcept>

#include "peff/kt.hpp"
#include "peff/machine.hpp"

using namespace peff;

namespace {

Bits randomBits(std::mt19937_64& rng, std::size_t len) {
    Bits b;
    for (std::size_t i = 0; i < len; ++i) b.push(rng() & 1);
    return b;
}

// Independent double loop over (program, time) pairs: every program of length
// up to the budget once per power-of-two time slot. Returns the least level of
// a halting witness, shared run() being the single source of machine truth.
std::optional<int> naiveKtOracle(const Bits& w, const Bits& u, int budget) {
    std::optional<int> best;
    for (const Program& e : enumeratePrograms(budget)) {
        for (int j = 0; static_cast<int>(e.length()) + j <= budget; ++j) {
            ExecOutcome out = run(e, u, 1ULL << j);
            if (out.status == RunStatus::Halted && out.output == w) {
                int level = static_cast<int>(e.length()) + j;
                if (!best || level < *best) best = level;
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("kt of the empty string is exactly zero") {
    KtEngine engine;
    KtResult r = engine.kt(Bits{}, Bits{}, 8);
    CHECK(r.exact());
    CHECK(r.certificate.level == 0);
    CHECK(r.certificate.program.length() == 0);
    CHECK(verifyCertificate(r.certificate) == CertFailure::Ok);
}

TEST_CASE("kt matches the naive oracle on short strings") {
    KtEngine engine;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 12; ++i) {
        Bits w = randomBits(rng, 1 + rng() % 4);
        for (const Bits& u : {Bits{}, w}) {
            KtResult r = engine.kt(w, u, 12);
            auto expected = naiveKtOracle(w, u, 12);
            if (expected) {
                REQUIRE(r.exact());
                CHECK(r.certificate.level == *expected);
            } else {
                CHECK_FALSE(r.exact());
            }
        }
    }
}

TEST_CASE("copy witness makes conditioned complexity cheap") {
    KtEngine engine;
    std::mt19937_64 rng(21);
    for (int len : {4, 6, 8}) {
        Bits w = randomBits(rng, len);
        KtResult r = engine.kt(w, w, 10);
        REQUIRE(r.exact());
        CHECK(r.certificate.level <= 4 + ceilLog2(static_cast<std::uint64_t>(len) + 2));
    }
}

TEST_CASE("conditioning never raises the level") {
    KtEngine engine;
    std::mt19937_64 rng(34);
    for (int i = 0; i < 20; ++i) {
        Bits w = randomBits(rng, 1 + rng() % 5);
        Bits u = randomBits(rng, rng() % 6);
        KtResult plain = engine.kt(w, Bits{}, 12);
        KtResult given = engine.kt(w, u, 12);
        if (plain.exact()) {
            REQUIRE(given.exact());
            CHECK(given.certificate.level <= plain.certificate.level);
        }
    }
}

TEST_CASE("sandwich bounds for lengths 1..8") {
    KtEngine engine;
    const auto& spec = machineSpec();
    std::mt19937_64 rng(55);
    for (int len = 1; len <= 8; ++len) {
        for (int rep = 0; rep < 4; ++rep) {
            Bits w = randomBits(rng, len);
            for (const Bits& u : {Bits{}, w.reversed()}) {
                KtResult r = engine.kt(w, u, 12);
                CHECK(r.certificate.level >= ceilLog2(len));
                CHECK(r.certificate.level <=
                      static_cast<int>(len + 2 * ceilLog2(len + 1) + spec.cPrint));
                CHECK(verifyCertificate(r.certificate) == CertFailure::Ok);
            }
        }
    }
}

TEST_CASE("results are deterministic") {
    KtEngine a, b;
    Bits w = Bits::fromString("1011");
    KtResult r1 = a.kt(w, Bits{}, 12);
    KtResult r2 = b.kt(w, Bits{}, 12);
    CHECK(r1.certificate.toJson() == r2.certificate.toJson());
}

TEST_CASE("itInfo: empty condition conveys nothing") {
    KtEngine engine;
    ItValue v = engine.itInfo(Bits{}, Bits::fromString("110"), 15);
    CHECK(v.value == 0);
    CHECK(v.exact);
}

TEST_CASE("itInfo: a string tells a lot about itself") {
    KtEngine engine;
    // Pick the 8-bit string with the largest plain level by exhaustive scan.
    Bits worst;
    int worstLevel = -1;
    for (int v = 0; v < 256; ++v) {
        Bits w;
        for (int i = 7; i >= 0; --i) w.push((v >> i) & 1);
        KtResult r = engine.kt(w, Bits{}, 14);
        int level = r.certificate.level;
        if (level > worstLevel) {
            worstLevel = level;
            worst = w;
        }
    }
    ItValue self = engine.itInfo(worst, worst, 14);
    CHECK(self.value >= worstLevel - (4 + ceilLog2(10)));
    CHECK(self.value > 0);
}

TEST_CASE("certificate tampering is caught") {
    KtEngine engine;
    Bits w = Bits::fromString("10110");
    KtResult r = engine.kt(w, Bits{}, 18);
    REQUIRE(r.exact());
    KtCertificate broken = r.certificate;
    if (broken.time > 1) {
        broken.time -= 1;  // below the halting step count or the level arithmetic breaks
        CHECK(verifyCertificate(broken) != CertFailure::Ok);
    }
    KtCertificate wrongVersion = r.certificate;
    wrongVersion.machineVersion = "other-machine";
    CHECK(verifyCertificate(wrongVersion) == CertFailure::VersionMismatch);
    KtCertificate wrongTarget = r.certificate;
    wrongTarget.target.push(true);
    CHECK(verifyCertificate(wrongTarget) == CertFailure::OutputMismatch);
}

TEST_CASE("certificate composition: identity second stage") {
    KtEngine engine;
    Bits u = Bits::fromString("1010");
    KtResult first = engine.kt(u, Bits{}, 16);
    KtResult second = engine.kt(u, u, 16);
    REQUIRE(first.exact());
    REQUIRE(second.exact());
    KtCertificate joined = composeCertificates(first.certificate, second.certificate);
    CHECK(joined.target == u);
    CHECK(joined.condition.empty());
    CHECK(verifyCertificate(joined) == CertFailure::Ok);
}

TEST_CASE("composition level bound on random pairs") {
    const auto& spec = machineSpec();
    KtEngine engine;
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int i = 0; checked < 100 && i < 400; ++i) {
        Bits u = randomBits(rng, rng() % 4);
        Bits w = randomBits(rng, rng() % 4);
        KtResult cu = engine.kt(u, Bits{}, 15);
        KtResult cwu = engine.kt(w, u, 15);
        if (!cu.exact() || !cwu.exact()) continue;
        KtCertificate joined = composeCertificates(cu.certificate, cwu.certificate);
        CHECK(joined.level <= cu.certificate.level + cwu.certificate.level +
                                  2 * ceilLog2(cu.certificate.level + 1) + static_cast<int>(spec.cComp));
        CHECK(verifyCertificate(joined) == CertFailure::Ok);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("triangle chains compose") {
    KtEngine engine;
    std::mt19937_64 rng(88);
    const auto& spec = machineSpec();
    for (int i = 0; i < 50; ++i) {
        Bits u = randomBits(rng, rng() % 4);
        Bits v = randomBits(rng, rng() % 4);
        Bits w = randomBits(rng, rng() % 4);
        KtResult cvu = engine.kt(v, u, 15);
        KtResult cwv = engine.kt(w, v, 15);
        REQUIRE(cvu.exact());
        REQUIRE(cwv.exact());
        KtCertificate chained = composeCertificates(cvu.certificate, cwv.certificate);
        CHECK(chained.condition == u);
        CHECK(chained.target == w);
        CHECK(chained.level <= cvu.certificate.level + cwv.certificate.level +
                                   2 * ceilLog2(cvu.certificate.level + 1) + static_cast<int>(spec.cComp));
        CHECK(verifyCertificate(chained) == CertFailure::Ok);
    }
}

TEST_CASE("composition rejects mismatched stages") {
    KtEngine engine;
    KtResult a = engine.kt(Bits::fromString("11"), Bits{}, 10);
    KtResult b = engine.kt(Bits::fromString("00"), Bits::fromString("01"), 10);
    REQUIRE(a.exact());
    REQUIRE(b.exact());
    CHECK_THROWS_AS(composeCertificates(a.certificate, b.certificate), std::invalid_argument);
}

TEST_CASE("cache replays results without re-search") {
    std::string path = "kt_cache_test.jsonl";
    std::remove(path.c_str());
    Bits w = Bits::fromString("110101");
    {
        CertificateCache cache(path);
        KtEngine engine(&cache);
        KtResult r = engine.kt(w, Bits{}, 18);
        REQUIRE(r.exact());
        cache.flush();
    }
    {
        CertificateCache cache(path);
        KtEngine engine(&cache);
        std::uint64_t before = engine.enumerationSteps();
        KtResult r = engine.kt(w, Bits{}, 18);
        CHECK(r.exact());
        CHECK(engine.enumerationSteps() == before);  // pure cache hit
        const KtCertificate* hit = cache.lookup(w, Bits{});
        REQUIRE(hit != nullptr);
        CHECK(verifyCertificate(*hit) == CertFailure::Ok);
    }
    std::remove(path.c_str());
}
