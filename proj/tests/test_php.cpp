#include <doctest.h>

#include "helpers.hpp"
#include "peff/generators.hpp"
#include "peff/kt.hpp"
#include "peff/machine.hpp"
#include "peff/proofs.hpp"

using namespace peff;
using peff::testing::exhaustiveSat;

TEST_CASE("smallest pigeonhole instance") {
    Cnf c = genPhp(1);
    CHECK(c.varCount() == 2);
    REQUIRE(c.clauses().size() == 3);
    CHECK(c.clauses()[0] == Clause{1});
    CHECK(c.clauses()[1] == Clause{2});
    CHECK(c.clauses()[2] == Clause{-1, -2});
}

TEST_CASE("clause counts follow the encoding") {
    Cnf c = genPhp(2);
    CHECK(c.varCount() == 6);
    CHECK(c.clauses().size() == 9);  // 3 pigeon + 6 hole
    Cnf c3 = genPhp(3);
    CHECK(c3.varCount() == 12);
    CHECK(c3.clauses().size() == 4 + 3 * 6);
}

TEST_CASE("instances are unsatisfiable") {
    for (int n = 1; n <= 3; ++n) CHECK_FALSE(exhaustiveSat(genPhp(n)).has_value());
}

TEST_CASE("the tautology rendering is a tautology") {
    for (int n = 1; n <= 2; ++n) {
        Formula tau = phpTautology(n);
        CHECK(tau.usesContiguousVars());
        CHECK(isTautologyBruteforce(tau).isTautology);
    }
}

TEST_CASE("ER refutations verify for n = 1..4") {
    for (int n = 1; n <= 4; ++n) {
        auto proof = erProofPhp(n);
        REQUIRE(proof.has_value());
        RejectReason reason;
        REQUIRE_MESSAGE(checkResolutionProof(*proof, &reason), std::string(rejectReasonName(reason)));
        Bits w = erProofBits(phpTautology(n), *proof);
        VerifyResult v = verify(ProofSystemId::er(), w);
        REQUIRE_MESSAGE(v.accepted(), std::string(rejectReasonName(v.reason)));
        CHECK(v.formula->identical(phpTautology(n)));
    }
}

TEST_CASE("refutation size grows polynomially at desk scale") {
    std::vector<std::uint64_t> sizes;
    for (int n = 1; n <= 4; ++n) {
        auto bits = erProofPhpBits(n);
        REQUIRE(bits.has_value());
        sizes.push_back(bits->size());
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        CHECK(sizes[i] > sizes[i - 1]);
        CHECK(sizes[i] <= 16 * sizes[i - 1]);  // recorded growth stays under a fixed power
    }
}

TEST_CASE("the uniform generator program compresses each refutation") {
    KtEngine engine;
    for (int n = 1; n <= 4; ++n) {
        auto bits = erProofPhpBits(n);
        REQUIRE(bits.has_value());
        Program seed = assemble("phpgen " + std::to_string(n));
        KtResult r = engine.kt(*bits, Bits{}, 0, {seed});
        CHECK_FALSE(r.exact());
        CHECK(r.certificate.program == seed);
        CHECK(verifyCertificate(r.certificate) == CertFailure::Ok);
        // Far below the print route for every instance past the first.
        if (n >= 2)
            CHECK(r.certificate.level <
                  static_cast<int>(bits->size()));
    }
}

TEST_CASE("construction aborts cleanly under a tiny budget") {
    std::uint64_t budget = 40;
    auto charge = [&budget](std::uint64_t k) {
        if (k > budget) {
            budget = 0;
            return false;
        }
        budget -= k;
        return true;
    };
    CHECK_FALSE(erProofPhp(3, charge).has_value());
}

TEST_CASE("dimacs round-trip on a mid-sized instance") {
    Cnf php3 = genPhp(3);
    Cnf back = fromDimacs(toDimacs(php3));
    CHECK(back == php3);
    CHECK(toDimacs(back) == toDimacs(php3));
}
