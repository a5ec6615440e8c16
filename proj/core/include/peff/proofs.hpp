#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "peff/bits.hpp"
#include "peff/cnf.hpp"
#include "peff/family.hpp"
#include "peff/formula.hpp"

namespace peff {

/// Proof encoding revision; reported alongside every size measurement.
inline constexpr const char* kProofEncodingVersion = "enc1";

/// Incremental work accounting. Returns false when the budget is exhausted;
/// an empty function means unmetered.
using WorkCharge = std::function<bool(std::uint64_t)>;

// ---------------------------------------------------------------------------
// Proof object wire format (version enc1)
//
// Every proof begins with the formula section: the ASCII bits of the
// canonical rendering of the proven formula followed by a NUL byte (renderings
// never contain NUL). The tail is system specific:
//
//   TT      1-bits of length exactly 2^varCount.
//   Res     g(#derived+1), then each derived clause as
//           g(width+1) { sign bit (1 = negated), g(var) }*  with variables
//           strictly increasing inside a clause; the last clause is empty.
//           Input clauses of the definitional clause form of the negated
//           formula are implicit lines 0..m-1. A derived clause is accepted
//           when it is the resolvent of two earlier lines on some pivot.
//   ER      g(#extensions+1), then per extension two literals (sign bit,
//           g(var); first variable smaller), defining fresh variable
//           N+k ≡ l1 & l2 and contributing three clause lines; then the Res
//           section as above.
//   PS      the solver trace, events encoded as
//           00 decide | 01 g(clause+1) propagate | 10 g(clause+1) conflict |
//           110 flip | 111 exhausted;
//           accepted iff replaying the frozen solver reproduces it bit-exact.
//   Designated  the all-ones string 1^n names instance n of the attached
//           any other string is delegated to the base system.
//   Record  evaluation bitmap of length 2^varCount followed by a 1 bit;
//           accepted iff the named decider's replayed record matches.
// ---------------------------------------------------------------------------

struct Decider;

struct ProofSystemId {
    enum class Kind { TT, Res, ER, Trace, Designated, Record };

    Kind kind;
    std::string solverConfig;              // PS
    std::string familyTag;                 // Designated
    std::shared_ptr<ProofSystemId> base;   // Designated
    std::string deciderTag;                // Record

    static ProofSystemId tt() { return {Kind::TT, {}, {}, nullptr, {}}; }
    static ProofSystemId res() { return {Kind::Res, {}, {}, nullptr, {}}; }
    static ProofSystemId er() { return {Kind::ER, {}, {}, nullptr, {}}; }
    static ProofSystemId trace() { return {Kind::Trace, "dpll1", {}, nullptr, {}}; }
    static ProofSystemId designated(ProofSystemId baseSystem, std::string familyTag);
    static ProofSystemId record(std::string deciderTag) { return {Kind::Record, {}, {}, nullptr, std::move(deciderTag)}; }

    std::string name() const;
    static std::optional<ProofSystemId> parseName(const std::string& name);
};

struct VerifierContext {
    const FamilyRegistry* families = nullptr;
    const std::map<std::string, Decider>* deciders = nullptr;
};

enum class RejectReason {
    None,
    BadFormulaSection,
    BadPadding,
    NonTautology,
    BadClauseEncoding,
    UnresolvableLine,
    BadExtension,
    MissingEmptyClause,
    TraceDivergence,
    BadEventEncoding,
    FamilyOutOfRange,
    UnknownFamily,
    UnknownDecider,
    RecordMismatch,
    TrailingBits,
};

const char* rejectReasonName(RejectReason r);

struct VerifyResult {
    std::optional<Formula> formula;
    RejectReason reason = RejectReason::None;
    bool accepted() const { return formula.has_value(); }
};

/// Checks w against system P; returns the proven formula or a reject reason.
VerifyResult verify(const ProofSystemId& P, const Bits& w, const VerifierContext& ctx = {});

void appendFormulaSection(Bits& out, const Formula& f);

/// Decodes the leading formula section; advances the reader past the NUL byte.
std::optional<Formula> readFormulaSection(BitReader& reader);

// --- resolution ------------------------------------------------------------

enum class ResolveError { None, PivotMissing, Tautological };

/// (c1 \ {pivot}) ∪ (c2 \ {-pivot}); pivot must occur positively in c1 and
/// negatively in c2 and the result must not contain a complementary pair.
std::optional<Clause> resolveClauses(const Clause& c1, const Clause& c2, int pivot,
                                     ResolveError* err = nullptr);

struct ExtensionDef {
    int newVar;  // == target varCount + 1 + position
    int lit1;
    int lit2;  // |lit1's var| < |lit2's var|
};

struct ResolutionStep {
    int fromA;  // line index carrying the pivot positively
    int fromB;  // line index carrying the pivot negatively
    int pivot;
};

/// A refutation of `target`. Line numbering: inputs 0..m-1, then three
/// definition clauses per extension, then the derived clauses in order.
struct ResolutionProof {
    Cnf target;
    std::vector<ExtensionDef> extensions;
    std::vector<Clause> derived;
    std::vector<ResolutionStep> steps;  // parallel to derived

    int lineBase() const { return static_cast<int>(target.clauses().size() + 3 * extensions.size()); }
    std::vector<Clause> allLines() const;
};

/// Validates every step and that the proof ends in the empty clause.
bool checkResolutionProof(const ResolutionProof& proof, RejectReason* reason = nullptr);

Bits encodeClause(const Clause& c);
Bits encodeResSection(const ResolutionProof& proof);          // derived clauses only
Bits encodeErSection(const ResolutionProof& proof);           // extensions + derived
std::optional<ResolutionProof> decodeDerivation(BitReader& reader, const Cnf& target, bool allowExtensions,
                                                RejectReason* reason = nullptr);

Bits resProofBits(const Formula& tau, const ResolutionProof& proof);  // full Res proof object
Bits erProofBits(const Formula& tau, const ResolutionProof& proof);   // full ER proof object

/// Re-tags an extension-free refutation as an ER proof (identity embedding).
Bits embedRInEr(const Formula& tau, const ResolutionProof& proof);

std::string resProofToText(const ResolutionProof& proof);

/// Applies a partial assignment to a refutation, dropping satisfied lines and
/// shrinking the rest. The result refutes restrictCnf(target, rho) and has at
/// most as many derived lines.
Cnf restrictCnf(const Cnf& c, const std::map<int, bool>& rho);
ResolutionProof restrictProof(const ResolutionProof& proof, const std::map<int, bool>& rho);

// --- the frozen solver ------------------------------------------------------

struct DpllEvent {
    enum class Type { Decide, Propagate, Conflict, Flip, Exhaust };
    Type type;
    int clauseIdx = -1;  // Propagate/Conflict
    bool operator==(const DpllEvent& o) const { return type == o.type && clauseIdx == o.clauseIdx; }
};

struct DpllTrace {
    std::vector<DpllEvent> events;
    bool operator==(const DpllTrace& o) const { return events == o.events; }
};

struct DpllResult {
    enum class Status { Sat, Unsat, Aborted };
    Status status;
    std::optional<Assignment> model;  // Sat
    DpllTrace trace;                  // Unsat
    std::uint64_t work = 0;
};

/// Deterministic DPLL: unit propagation to fixpoint scanning clauses in index
/// order, decide the smallest-index unassigned variable, false branch first.
DpllResult dpllSolve(const Cnf& cnf, const WorkCharge& charge = {});

Bits traceBits(const DpllTrace& trace);
std::string traceToText(const DpllTrace& trace);
Bits psProofBits(const Formula& tau, const DpllTrace& trace);

/// Tree-shaped refutation read off the solver's failed search, using the same
/// frozen heuristic. Status Sat when the clause set is satisfiable.
struct RefutationResult {
    enum class Status { Refuted, Sat, Aborted };
    Status status;
    ResolutionProof proof;
};
RefutationResult canonicalRefutation(const Cnf& cnf, const WorkCharge& charge = {});

// --- canonical whole-proof constructions ------------------------------------

std::optional<Bits> makeProof(const ProofSystemId& P, const Formula& tau, const VerifierContext& ctx = {});

Bits ttProofBits(const Formula& tau);
std::uint64_t ttPaddingLength(const Formula& tau);  // 2^varCount, varCount <= 62

// --- minimal proof size ------------------------------------------------------

struct SpResult {
    enum class Status { Exact, Unknown };
    Status status;
    std::uint64_t bits = 0;        // Exact
    std::uint64_t lowerBound = 0;  // valid in both cases
    std::uint64_t upperBound = 0;  // 0 = none known
    bool exact() const { return status == Status::Exact; }
};

struct SpOptions {
    std::uint64_t capBits = 1 << 14;
    std::uint64_t maxStates = 2'000'000;  // search-node guard for Res
};

/// Minimal proof bit length. TT/PS/Record have a single valid proof each and
/// are closed-form; Res runs an exhaustive least-cost search over derivable
/// clause sets; ER reports the extension-free value as an upper bound only.
SpResult spExact(const ProofSystemId& P, const Formula& tau, const SpOptions& opts = {},
                 const VerifierContext& ctx = {});

// --- deciders ----------------------------------------------------------------

/// A deterministic TAUT decider with a replayable computation record.
struct Decider {
    std::string tag;
    std::function<bool(const Formula&)> decide;
    std::function<Bits(const Formula&)> record;  // the accepting computation record
};

/// The stock exhaustive decider: record = evaluation bitmap + verdict bit.
Decider bruteForceDecider(int varCap = 24);

}  // namespace peff
