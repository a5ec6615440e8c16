#include <doctest.h>

#include <random>

#include "peff/cnf.hpp"
#include "peff/formula.hpp"
#include "peff/machine.hpp"
#include "peff/proofs.hpp"

using namespace peff;

namespace {

Bits randomBits(std::mt19937_64& rng, std::size_t len) {
    Bits b;
    for (std::size_t i = 0; i < len; ++i) b.push(rng() & 1);
    return b;
}

// Small halting programs for composition tests.
Program randomHaltingProgram(std::mt19937_64& rng) {
    switch (rng() % 4) {
        case 0: return printProgramFor(randomBits(rng, rng() % 6));
        case 1: return assemble("ones " + std::to_string(rng() % 9));
        case 2: return assemble("copyin");
        default: {
            std::string payload = randomBits(rng, 1 + rng() % 3).toString();
            return assemble("repeat " + std::to_string(rng() % 4) + " " + payload);
        }
    }
}

}  // namespace

TEST_CASE("empty program halts immediately with empty output") {
    ExecOutcome out = run(Program{Bits{}}, Bits::fromString("1011"), 1);
    CHECK(out.status == RunStatus::Halted);
    CHECK(out.output.empty());
    CHECK(out.steps <= 1);
}

TEST_CASE("print program emits its payload on every input") {
    Bits w = Bits::fromString("101");
    Program p = printProgramFor(w);
    for (const std::string& u : {"", "1", "111100001"}) {
        ExecOutcome out = run(p, Bits::fromString(u), 1000);
        CHECK(out.status == RunStatus::Halted);
        CHECK(out.output == w);
    }
}

TEST_CASE("print program: exhaustive outputs up to length 16") {
    int failures = 0;
    for (int len = 0; len <= 16 && failures == 0; ++len) {
        for (std::uint64_t v = 0; v < (1ULL << len); ++v) {
            Bits w;
            for (int i = len - 1; i >= 0; --i) w.push((v >> i) & 1);
            ExecOutcome out = run(printProgramFor(w), Bits{}, 4 * (len + 2));
            if (out.status != RunStatus::Halted || !(out.output == w) ||
                out.steps > static_cast<std::uint64_t>(len) + 2)
                ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("print program length bound") {
    const auto& spec = machineSpec();
    CHECK(spec.cPrint == printProgramFor(Bits{}).length());
    for (int len : {0, 1, 2, 7, 8, 31, 64}) {
        Bits w = Bits::zeros(len);
        std::uint64_t bound = len + 2 * ceilLog2(len + 1) + spec.cPrint;
        CHECK(printProgramFor(w).length() <= bound);
    }
}

TEST_CASE("runs are pure") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        Program e{randomBits(rng, rng() % 20)};
        Bits u = randomBits(rng, rng() % 8);
        std::uint64_t t = 1 + rng() % 64;
        ExecOutcome a = run(e, u, t);
        ExecOutcome b = run(e, u, t);
        CHECK(a.status == b.status);
        CHECK(a.output == b.output);
        CHECK(a.steps == b.steps);
    }
}

TEST_CASE("totality and step budget honored on random programs") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 500; ++i) {
        Program e{randomBits(rng, rng() % 40)};
        Bits u = randomBits(rng, rng() % 10);
        std::uint64_t t = 1 + rng() % 128;
        ExecOutcome out = run(e, u, t);
        if (out.status == RunStatus::Halted)
            CHECK(out.steps <= t);
        else
            CHECK(out.steps == t);
        // One step per emitted bit.
        CHECK(out.output.size() <= out.steps);
    }
}

TEST_CASE("programs without input opcodes ignore the input") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 300; ++i) {
        Bits w = randomBits(rng, rng() % 10);
        Program p = printProgramFor(w);
        ExecOutcome a = run(p, Bits{}, 256);
        ExecOutcome b = run(p, randomBits(rng, rng() % 12), 256);
        CHECK(a.output == b.output);
        CHECK(a.steps == b.steps);
    }
}

TEST_CASE("composition behaves as sequential application") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        Bits u0 = randomBits(rng, rng() % 6);
        Program e2 = randomHaltingProgram(rng);
        Program composed = composePrograms(printProgramFor(u0), e2);
        ExecOutcome direct = run(e2, u0, 4096);
        ExecOutcome piped = run(composed, Bits{}, 4096);
        REQUIRE(direct.status == RunStatus::Halted);
        REQUIRE(piped.status == RunStatus::Halted);
        CHECK(piped.output == direct.output);
    }
}

TEST_CASE("composition with an empty-output second stage") {
    Program e = assemble("ones 5");
    Program composed = composePrograms(e, printProgramFor(Bits{}));
    ExecOutcome out = run(composed, Bits::fromString("101"), 256);
    CHECK(out.status == RunStatus::Halted);
    CHECK(out.output.empty());
}

TEST_CASE("composition length bound on random pairs") {
    const auto& spec = machineSpec();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        Program e1{randomBits(rng, rng() % 21)};
        Program e2{randomBits(rng, rng() % 21)};
        Program c = composePrograms(e1, e2);
        CHECK(c.length() <= e1.length() + e2.length() + 2 * ceilLog2(e1.length() + 1) + spec.cPair);
        // Steps: composition adds no dispatch cost of its own.
        ExecOutcome o1 = run(e1, Bits{}, 512);
        if (o1.status != RunStatus::Halted) continue;
        ExecOutcome o2 = run(e2, o1.output, 512);
        if (o2.status != RunStatus::Halted) continue;
        ExecOutcome oc = run(c, Bits{}, 2048);
        REQUIRE(oc.status == RunStatus::Halted);
        CHECK(oc.steps <= o1.steps + o2.steps + (e1.length() + e2.length()));
    }
}

TEST_CASE("enumeration: order and counts") {
    auto programs = enumeratePrograms(1);
    REQUIRE(programs.size() == 3);
    CHECK(programs[0].code.empty());
    CHECK(programs[1].code.toString() == "0");
    CHECK(programs[2].code.toString() == "1");

    for (int k : {2, 3, 6}) {
        CHECK(enumeratePrograms(k).size() == (1ULL << (k + 1)) - 1);
    }

    auto all = enumeratePrograms(8);
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(Bits::lengthLexLess(all[i - 1].code, all[i].code));
}

TEST_CASE("assemble print behaves as printProgramFor") {
    Program a = assemble("print 101");
    Program b = printProgramFor(Bits::fromString("101"));
    CHECK(a == b);
    ExecOutcome out = run(assemble("emit 101"), Bits{}, 64);
    CHECK(out.output.toString() == "101");
}

TEST_CASE("assemble copy-input") {
    Program copy = assemble("copyin");
    std::mt19937_64 rng(3);
    for (int len = 0; len <= 8; ++len)
        for (int rep = 0; rep < 4; ++rep) {
            Bits u = randomBits(rng, len);
            ExecOutcome out = run(copy, u, 64);
            CHECK(out.status == RunStatus::Halted);
            CHECK(out.output == u);
        }
}

TEST_CASE("assemble of empty source halts with empty output") {
    Program e = assemble("");
    CHECK(e.length() == 0);
    ExecOutcome out = run(e, Bits::fromString("11"), 1);
    CHECK(out.status == RunStatus::Halted);
    CHECK(out.output.empty());
}

TEST_CASE("assemble rejects bad input") {
    CHECK_THROWS(assemble("frobnicate"));
    CHECK_THROWS(assemble("emit 012"));
    CHECK_THROWS(assemble("ones"));
    CHECK_THROWS(assemble("phpgen 0"));
    CHECK_THROWS(assemble("pipe { emit 1 }"));
}

TEST_CASE("assemble pipe round-trips through composePrograms") {
    Program p = assemble("pipe { print 110 } { copyin emit 1 }");
    Program q = composePrograms(printProgramFor(Bits::fromString("110")), assemble("copyin emit 1"));
    CHECK(p == q);
    ExecOutcome out = run(p, Bits{}, 256);
    CHECK(out.output.toString() == "1101");
}

TEST_CASE("proof opcodes emit verifier-accepted proofs") {
    Formula tau = Formula::parse("(x1 | ~x1)");
    Bits input = Bits::fromAscii(tau.render());
    struct Case {
        const char* source;
        ProofSystemId system;
    } cases[] = {
        {"ttproof", ProofSystemId::tt()},
        {"resproof", ProofSystemId::res()},
        {"erproof", ProofSystemId::er()},
        {"traceproof", ProofSystemId::trace()},
    };
    for (const auto& c : cases) {
        ExecOutcome out = run(assemble(c.source), input, 1 << 16);
        REQUIRE(out.status == RunStatus::Halted);
        VerifyResult v = verify(c.system, out.output);
        REQUIRE(v.accepted());
        CHECK(v.formula->identical(tau));
    }
}

TEST_CASE("proof opcodes are quiet on non-tautologies and garbage") {
    ExecOutcome garbage = run(assemble("resproof"), Bits::fromString("10101"), 1 << 12);
    CHECK(garbage.status == RunStatus::Halted);
    CHECK(garbage.output.empty());
    ExecOutcome sat = run(assemble("resproof"), Bits::fromAscii("x1"), 1 << 12);
    CHECK(sat.status == RunStatus::Halted);
    CHECK(sat.output.empty());
    // ttproof renders and pads regardless; the verifier rejects the result.
    ExecOutcome tt = run(assemble("ttproof"), Bits::fromAscii("x1"), 1 << 12);
    CHECK(tt.status == RunStatus::Halted);
    CHECK_FALSE(verify(ProofSystemId::tt(), tt.output).accepted());
}

TEST_CASE("machine constants are stable") {
    const auto& spec = machineSpec();
    CHECK(spec.cPrint == 10);
    CHECK(spec.cPair == 5);
    CHECK(spec.cComp == spec.cPair + 1);
    CHECK(spec.cIgnore == 0);
    CHECK(machineVersion() == spec.versionTag);
    CHECK(spec.toJson().find(spec.versionTag) != std::string::npos);
}
