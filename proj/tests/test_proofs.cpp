#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "peff/generators.hpp"
#include "peff/proofs.hpp"

using namespace peff;
using peff::testing::exhaustiveSat;
using peff::testing::randomFormula;

TEST_CASE("resolve: units give the empty clause") {
    auto r = resolveClauses({1}, {-1}, 1);
    REQUIRE(r.has_value());
    CHECK(r->empty());
}

TEST_CASE("resolve: basic case") {
    auto r = resolveClauses({1, 2}, {-1, 3}, 1);
    REQUIRE(r.has_value());
    CHECK(*r == Clause{2, 3});
}

TEST_CASE("resolve: pivot and tautology failures") {
    ResolveError err;
    CHECK_FALSE(resolveClauses({1, 2}, {3}, 1, &err).has_value());
    CHECK(err == ResolveError::PivotMissing);
    CHECK_FALSE(resolveClauses({1, 2}, {-1, -2}, 1, &err).has_value());
    CHECK(err == ResolveError::Tautological);
}

TEST_CASE("resolve soundness on random clauses") {
    std::mt19937_64 rng(101);
    int done = 0;
    while (done < 100) {
        auto randomClause = [&]() {
            Clause c;
            for (int v = 1; v <= 4; ++v) {
                switch (rng() % 3) {
                    case 0: c.push_back(v); break;
                    case 1: c.push_back(-v); break;
                    default: break;
                }
            }
            return c;
        };
        Clause c1 = randomClause(), c2 = randomClause();
        int pivot = 1 + static_cast<int>(rng() % 4);
        auto r = resolveClauses(c1, c2, pivot);
        if (!r) continue;
        ++done;
        auto satisfies = [](const Clause& c, const Assignment& a) {
            for (int lit : c)
                if (lit > 0 ? a.value(lit) : !a.value(-lit)) return true;
            return false;
        };
        for (std::uint64_t idx = 0; idx < 16; ++idx) {
            Assignment a = Assignment::fromIndex(idx, 4);
            if (satisfies(c1, a) && satisfies(c2, a)) CHECK(satisfies(*r, a));
        }
    }
}

TEST_CASE("dpll: single conflict on a unit contradiction") {
    Cnf c(1);
    c.addClause({1});
    c.addClause({-1});
    DpllResult r = dpllSolve(c);
    REQUIRE(r.status == DpllResult::Status::Unsat);
    int conflicts = 0;
    for (const auto& e : r.trace.events)
        if (e.type == DpllEvent::Type::Conflict) ++conflicts;
    CHECK(conflicts == 1);
    CHECK(r.trace.events.back().type == DpllEvent::Type::Exhaust);
}

TEST_CASE("dpll: satisfying assignments satisfy all clauses") {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 60; ++i) {
        Cnf c(4);
        int m = 2 + static_cast<int>(rng() % 6);
        for (int k = 0; k < m; ++k) {
            Clause clause;
            for (int v = 1; v <= 4; ++v)
                if (rng() % 2) clause.push_back(rng() % 2 ? v : -v);
            if (clause.empty()) clause.push_back(1);
            auto norm = normalizeClause(clause);
            if (norm) c.addClause(*norm);
        }
        DpllResult r = dpllSolve(c);
        auto model = exhaustiveSat(c);
        if (model)
            REQUIRE(r.status == DpllResult::Status::Sat);
        else
            REQUIRE(r.status == DpllResult::Status::Unsat);
        if (r.status == DpllResult::Status::Sat) CHECK(c.satisfied(*r.model));
    }
}

TEST_CASE("trace proofs replay bit-exactly") {
    Formula tau = Formula::parse("(x1 & x2 | ~x1 | ~x2)");
    auto proof = makeProof(ProofSystemId::trace(), tau);
    REQUIRE(proof.has_value());
    VerifyResult v = verify(ProofSystemId::trace(), *proof);
    REQUIRE(v.accepted());
    CHECK(v.formula->identical(tau));

    // Any flipped bit in the trace section diverges.
    Bits broken = *proof;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        Bits mutated = broken;
        std::size_t pos = rng() % mutated.size();
        Bits flipped;
        for (std::size_t j = 0; j < mutated.size(); ++j) flipped.push(j == pos ? !mutated.at(j) : mutated.at(j));
        VerifyResult mv = verify(ProofSystemId::trace(), flipped);
        if (mv.accepted()) CHECK(isTautologyBruteforce(*mv.formula).isTautology);
    }
}

TEST_CASE("verify TT example") {
    Formula tau = Formula::parse("(x1 | ~x1)");
    Bits w = ttProofBits(tau);
    CHECK(w.size() == 8 * (tau.render().size() + 1) + 2);
    VerifyResult v = verify(ProofSystemId::tt(), w);
    REQUIRE(v.accepted());
    CHECK(v.formula->identical(tau));

    Bits shortPad = w.slice(0, w.size() - 1);
    CHECK(verify(ProofSystemId::tt(), shortPad).reason == RejectReason::BadPadding);

    Bits nonTaut = ttProofBits(Formula::parse("x1"));
    CHECK(verify(ProofSystemId::tt(), nonTaut).reason == RejectReason::NonTautology);
}

TEST_CASE("verify hand-built resolution proof") {
    // Target: clause set of the negated tautology (x1 | ~x1); refute by hand.
    Formula tau = Formula::parse("(x1 | ~x1)");
    Cnf target = negateToCnf(tau);
    RefutationResult stock = canonicalRefutation(target);
    REQUIRE(stock.status == RefutationResult::Status::Refuted);
    RejectReason reason;
    CHECK(checkResolutionProof(stock.proof, &reason));
    Bits w = resProofBits(tau, stock.proof);
    VerifyResult v = verify(ProofSystemId::res(), w);
    REQUIRE(v.accepted());
    CHECK(v.formula->identical(tau));
}

TEST_CASE("resolution rejects broken derivations") {
    Formula tau = Formula::parse("(x1 | ~x1)");
    auto proof = makeProof(ProofSystemId::res(), tau);
    REQUIRE(proof.has_value());
    // Truncating the derivation loses the empty clause.
    Bits cut = proof->slice(0, proof->size() - 1);
    CHECK_FALSE(verify(ProofSystemId::res(), cut).accepted());
}

TEST_CASE("completeness at toy scale") {
    testing::Rng rng(404);
    VerifierContext ctx;
    std::vector<ProofSystemId> systems = {ProofSystemId::tt(), ProofSystemId::res(), ProofSystemId::er(),
                                          ProofSystemId::trace()};
    int tautologies = 0;
    for (int i = 0; i < 200 && tautologies < 25; ++i) {
        Formula f = randomFormula(rng, 3, 3);
        if (!isTautologyBruteforce(f).isTautology) continue;
        ++tautologies;
        for (const auto& system : systems) {
            auto proof = makeProof(system, f, ctx);
            REQUIRE(proof.has_value());
            VerifyResult v = verify(system, *proof, ctx);
            REQUIRE(v.accepted());
            CHECK(v.formula->identical(f));
        }
    }
    CHECK(tautologies == 25);
}

TEST_CASE("embedding a resolution proof into ER") {
    Formula tau = phpTautology(1);
    auto refutation = canonicalRefutation(negateToCnf(tau));
    REQUIRE(refutation.status == RefutationResult::Status::Refuted);
    Bits resBits = resProofBits(tau, refutation.proof);
    Bits erBits = embedRInEr(tau, refutation.proof);
    CHECK(erBits.size() == resBits.size() + 1);  // the empty extension header
    VerifyResult v = verify(ProofSystemId::er(), erBits);
    REQUIRE(v.accepted());
    CHECK(v.formula->identical(tau));
    CHECK(verify(ProofSystemId::res(), resBits).formula->identical(*v.formula));
}

TEST_CASE("embedding cost is the fixed header on many proofs") {
    testing::Rng rng(505);
    int done = 0;
    for (int i = 0; i < 200 && done < 20; ++i) {
        Formula f = randomFormula(rng, 3, 3);
        if (!isTautologyBruteforce(f).isTautology) continue;
        auto ref = canonicalRefutation(negateToCnf(f));
        if (ref.status != RefutationResult::Status::Refuted) continue;
        ++done;
        CHECK(embedRInEr(f, ref.proof).size() == resProofBits(f, ref.proof).size() + 1);
    }
    CHECK(done == 20);
}

TEST_CASE("an appended extension keeps the ER proof valid") {
    Formula tau = Formula::parse("(x1 | ~x1)");
    auto ref = canonicalRefutation(negateToCnf(tau));
    REQUIRE(ref.status == RefutationResult::Status::Refuted);
    ResolutionProof extended = ref.proof;
    int n = extended.target.varCount();
    extended.extensions.push_back({n + 1, 1, 2});  // unused definition
    RejectReason reason;
    // Line references shift under the extension block, so rebuild the steps.
    ResolutionProof rebuilt = extended;
    int shift = 3;
    for (auto& step : rebuilt.steps) {
        int inputs = static_cast<int>(rebuilt.target.clauses().size());
        if (step.fromA >= inputs) step.fromA += shift;
        if (step.fromB >= inputs) step.fromB += shift;
    }
    REQUIRE(checkResolutionProof(rebuilt, &reason));
    Bits w = erProofBits(tau, rebuilt);
    VerifyResult v = verify(ProofSystemId::er(), w);
    REQUIRE(v.accepted());
}

TEST_CASE("restriction: empty restriction is the identity") {
    Formula tau = phpTautology(1);
    auto ref = canonicalRefutation(negateToCnf(tau));
    REQUIRE(ref.status == RefutationResult::Status::Refuted);
    ResolutionProof restricted = restrictProof(ref.proof, {});
    CHECK(restricted.derived.size() <= ref.proof.derived.size());
    RejectReason reason;
    CHECK(checkResolutionProof(restricted, &reason));
    CHECK(restricted.target == ref.proof.target);
}

TEST_CASE("restriction: pigeonhole refutation survives one assignment") {
    Formula tau = phpTautology(2);
    auto ref = canonicalRefutation(negateToCnf(tau));
    REQUIRE(ref.status == RefutationResult::Status::Refuted);
    ResolutionProof restricted = restrictProof(ref.proof, {{1, false}});
    RejectReason reason;
    REQUIRE_MESSAGE(checkResolutionProof(restricted, &reason), std::string(rejectReasonName(reason)));
    CHECK(restricted.derived.size() <= ref.proof.derived.size());
    CHECK(restricted.target == restrictCnf(ref.proof.target, {{1, false}}));
}

TEST_CASE("restriction never grows the proof on random cases") {
    testing::Rng rng(606);
    int done = 0;
    for (int i = 0; i < 1500 && done < 100; ++i) {
        Formula f = randomFormula(rng, 3, 3);
        if (!isTautologyBruteforce(f).isTautology) continue;
        auto ref = canonicalRefutation(negateToCnf(f));
        if (ref.status != RefutationResult::Status::Refuted) continue;
        std::map<int, bool> rho;
        int n = ref.proof.target.varCount();
        for (int v = 1; v <= n; ++v)
            if (rng() % 4 == 0) rho[v] = rng() % 2;
        ResolutionProof restricted = restrictProof(ref.proof, rho);
        RejectReason reason;
        REQUIRE_MESSAGE(checkResolutionProof(restricted, &reason), std::string(rejectReasonName(reason)));
        CHECK(restricted.derived.size() <= ref.proof.derived.size());
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("designated-axiom wrapper") {
    FamilyRegistry registry;
    registerBuiltinFamilies(registry, 2);
    VerifierContext ctx;
    ctx.families = &registry;
    ProofSystemId wrapper = genDesignatedFamily(ProofSystemId::res(), "php", registry);

    VerifyResult v3 = verify(wrapper, Bits::ones(3), ctx);
    REQUIRE(v3.accepted());
    CHECK(v3.formula->identical(phpTautology(3)));

    VerifyResult v4 = verify(wrapper, Bits::fromString("1111"), ctx);
    REQUIRE(v4.accepted());
    CHECK(v4.formula->identical(phpTautology(4)));

    // Every non-unary string delegates to the base system.
    Formula tau = Formula::parse("(x1 | ~x1)");
    auto resProof = makeProof(ProofSystemId::res(), tau, ctx);
    REQUIRE(resProof.has_value());
    VerifyResult delegated = verify(wrapper, *resProof, ctx);
    REQUIRE(delegated.accepted());
    CHECK(delegated.formula->identical(tau));

    CHECK(verify(wrapper, Bits::ones(40), ctx).reason == RejectReason::FamilyOutOfRange);
}

TEST_CASE("record system replays the decider") {
    Decider d = bruteForceDecider();
    ProofSystemId system = ProofSystemId::record(d.tag);
    Formula tau = Formula::parse("(x1 & x2 | ~x1 | ~x2)");
    auto proof = makeProof(system, tau);
    REQUIRE(proof.has_value());
    VerifyResult v = verify(system, *proof);
    REQUIRE(v.accepted());
    CHECK(v.formula->identical(tau));

    // One flipped record bit rejects.
    Bits broken;
    for (std::size_t i = 0; i < proof->size(); ++i)
        broken.push(i == proof->size() - 2 ? !proof->at(i) : proof->at(i));
    CHECK_FALSE(verify(system, broken).accepted());

    CHECK_FALSE(makeProof(system, Formula::parse("x1")).has_value());
}

TEST_CASE("proof text rendering mentions every line") {
    Formula tau = phpTautology(1);
    auto ref = canonicalRefutation(negateToCnf(tau));
    REQUIRE(ref.status == RefutationResult::Status::Refuted);
    std::string text = resProofToText(ref.proof);
    CHECK(text.find("<- input") != std::string::npos);
    CHECK(text.find("[]") != std::string::npos);
}
