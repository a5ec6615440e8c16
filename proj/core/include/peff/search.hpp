#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peff/bits.hpp"
#include "peff/cnf.hpp"
#include "peff/formula.hpp"
#include "peff/machine.hpp"
#include "peff/proofs.hpp"

namespace peff {

struct SearchOutcome {
    enum class Status { Found, BudgetExhausted };
    Status status = Status::BudgetExhausted;
    Bits proof;
    int level = -1;               // level search: exact level when found, cap+1 as a proven lower bound otherwise
    std::uint64_t rounds = 0;     // dovetailing rounds / levels examined
    std::uint64_t hostSteps = 0;  // machine steps plus per-bit verification work
    bool found() const { return status == Status::Found; }
};

/// Dovetailing search: in round i the first i programs (an optional planted
/// prefix, then length-lexicographic order) each run for i steps on the
/// rendering of tau; the first verifier-accepted output wins. Candidates that
/// fail verification are never returned.
class DovetailSearch {
public:
    DovetailSearch(ProofSystemId system, Formula tau, VerifierContext ctx = {},
                   std::vector<Program> planted = {});

    /// Runs one candidate. Returns the outcome when the search has finished.
    std::optional<SearchOutcome> tick();

    std::uint64_t hostSteps() const { return hostSteps_; }
    std::uint64_t round() const { return round_; }

private:
    ProofSystemId system_;
    Formula tau_;
    VerifierContext ctx_;
    std::vector<Program> planted_;
    Bits input_;
    std::uint64_t round_ = 1;
    std::uint64_t index_ = 0;  // next program within the round
    std::uint64_t hostSteps_ = 0;
    Program programAt(std::uint64_t idx) const;
};

/// Level search: for i = 0,1,... every pair of a program of length l <= i and
/// the time budget 2^(i-l) runs on the rendering of tau; outputs are checked
/// by the verifier. The returned level is exactly the least program-plus-time
/// complexity of any accepted proof, every lower level having been exhausted.
class LevelSearch {
public:
    LevelSearch(ProofSystemId system, Formula tau, VerifierContext ctx = {});

    /// Runs one (program, time) pair. Returns the outcome once found or once
    /// the current level exceeds levelCap.
    std::optional<SearchOutcome> tick(int levelCap);

    std::uint64_t hostSteps() const { return hostSteps_; }
    int level() const { return level_; }

private:
    ProofSystemId system_;
    Formula tau_;
    VerifierContext ctx_;
    Bits input_;
    int level_ = 0;
    int len_ = 0;
    ProgramEnumerator enumerator_{0};
    bool enumeratorReady_ = false;
    std::uint64_t hostSteps_ = 0;
};

SearchOutcome runDovetailSearch(const ProofSystemId& P, const Formula& tau, std::uint64_t stepCap,
                            const VerifierContext& ctx = {}, std::vector<Program> planted = {});

SearchOutcome runLevelSearch(const ProofSystemId& P, const Formula& tau, int levelCap,
                           const VerifierContext& ctx = {});

struct EfficiencyResult {
    int level;   // exact when exact is set, otherwise a proven lower bound
    bool exact;
    Bits proof;  // empty when not found
    std::uint64_t hostSteps;
};

/// Information efficiency of tau under P, by exhaustive level search.
EfficiencyResult informationEfficiency(const ProofSystemId& P, const Formula& tau, int levelCap, const VerifierContext& ctx = {});

// --- totalization -------------------------------------------------------------

enum class SearchAlgo { Dovetail, Level };

struct TotalizedResult {
    enum class Kind { Proof, Falsified, Exhausted };
    Kind kind;
    Bits proof;                               // Proof
    int level = -1;                           // Proof via level search
    std::optional<Assignment> counterexample;  // Falsified
    std::uint64_t searchSteps = 0;
    std::uint64_t falsifierSteps = 0;
};

struct TotalizeCaps {
    std::uint64_t stepCap = 50'000'000;
    int levelCap = 20;
};

/// Interleaves the chosen searcher with an exhaustive hunt for a falsifying
/// assignment, spending at most as many falsifier steps as search steps plus
/// one quantum; halts on every input formula.
TotalizedResult totalizedSearch(SearchAlgo algo, const ProofSystemId& P, const Formula& tau,
                                const TotalizeCaps& caps = {}, const VerifierContext& ctx = {});

struct DecisionOutcome {
    bool isTautology = false;
    bool budgetExhausted = false;
    std::uint64_t steps = 0;
};

/// Runs the totalized searcher and accepts iff the produced object verifies
/// back to the input formula.
DecisionOutcome deciderFromSearch(SearchAlgo algo, const ProofSystemId& P, const Formula& tau,
                                  const TotalizeCaps& caps = {}, const VerifierContext& ctx = {});

/// The proof system whose proofs are accepting computation records of M, plus
/// the searcher that emits the record.
struct DeciderSystem {
    ProofSystemId system;
    Decider decider;
    std::optional<Bits> search(const Formula& tau) const;  // the record proof, when M accepts
};
DeciderSystem systemFromDecider(Decider M);

// --- measurement helpers --------------------------------------------------------

struct PowerFit {
    double coefficient;  // C in steps <= C * 2^(2 level) * |tau|^exponent
    double exponent;     // fitted k, clamped to be nonnegative
};

struct FitSample {
    std::uint64_t steps;
    int level;
    std::uint64_t tauBits;
};

PowerFit fitStepLaw(const std::vector<FitSample>& samples);

}  // namespace peff
