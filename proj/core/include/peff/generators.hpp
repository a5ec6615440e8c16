#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peff/cnf.hpp"
#include "peff/family.hpp"
#include "peff/formula.hpp"
#include "peff/kt.hpp"
#include "peff/proofs.hpp"

namespace peff {

/// Pigeonhole contradiction: n+1 pigeons, n holes. Variable x_{i,j} is
/// (i-1)*n + j for pigeon i in hole j.
Cnf genPhp(int n);

/// The tautology "some pigeon clause fails": the rendered negation of the
/// clause set, a disjunction of per-clause conjunctions.
Formula phpTautology(int n);

/// Polynomial-size ER refutation of negateToCnf(phpTautology(n)): first the
/// clause set of genPhp(n) is recovered from the definitional clauses, then
/// the hole count is reduced n -> n-1 with extension variables down to the
/// two-pigeon base case. The optional charge meters construction work.
std::optional<ResolutionProof> erProofPhp(int n, const WorkCharge& charge = {});

/// Full ER proof object bits for instance n (what the phpgen opcode emits).
std::optional<Bits> erProofPhpBits(int n, const WorkCharge& charge = {});

/// Wires a designated-axiom wrapper around base: the all-ones string 1^n
/// proves instance n of the family. The family must already be registered.
ProofSystemId genDesignatedFamily(const ProofSystemId& base, const std::string& familyTag,
                                  const FamilyRegistry& registry);

/// Registers the stock families ("php", "orchain") into the registry.
void registerBuiltinFamilies(FamilyRegistry& registry, int checkUpTo = 3);

// --- circuit-described boolean functions -------------------------------------

struct Gate {
    enum class Op { And, Or, Xor, Not };
    Op op;
    int a;  // signal index: 1..inputs are inputs, then gates in order
    int b;  // ignored for Not
};

/// g: {0,1}^inputs -> {0,1}^|outputs|, described as an acyclic gate list.
struct ToyFunctionSpec {
    int inputs;
    std::vector<Gate> gates;
    std::vector<int> outputs;  // signal indices

    std::vector<bool> eval(const std::vector<bool>& in) const;
    std::string toJson() const;
    static ToyFunctionSpec fromJson(const std::string& text);
};

ToyFunctionSpec duplicateBitsFunction(int n);  // n -> 2n, each bit doubled
ToyFunctionSpec rotateLeftFunction(int n);     // n -> n bijection
ToyFunctionSpec identityFunction(int n);
ToyFunctionSpec firstBitFunction(int n);  // hard-bit style predicate: x -> x1

/// Truth-table evaluator family: maps a 1-gate circuit description over k
/// inputs (encoded in the input bits) to its 2^k-entry truth table.
ToyFunctionSpec circuitEvaluatorFunction(int k);

struct TauGResult {
    std::optional<Formula> formula;       // when b is outside the range of g
    std::optional<std::vector<bool>> preimage;  // when b is in the range
};

/// Formula stating that b is not a value of g, over input variables 1..n and
/// definitional auxiliaries for the gates. Requires |b| == outputs and checks
/// membership exhaustively (toy scale), rejecting b in range with a witness.
TauGResult genTauG(const ToyFunctionSpec& g, const std::vector<bool>& b);

/// Hard-bit implication formula for a length-preserving bijection h:
/// "h(x) = b -> B(x) = B(h^{-1}(b))", or with phi supplied
/// "h(x) = b -> phi(x)". h is checked bijective exhaustively.
Formula genMuEta(const ToyFunctionSpec& h, const ToyFunctionSpec& hardBit, const std::vector<bool>& b,
                 const std::optional<Formula>& phi = std::nullopt);

// --- compressibility filter ---------------------------------------------------

enum class FilterVerdict { Pass, PassUnconfirmed, Fail };

struct FilterResult {
    FilterVerdict verdict;
    std::uint64_t thresholdLevel;            // ceil((log2 |tau|)^2)
    std::optional<KtCertificate> certificate;  // Fail: the witness below threshold
};

/// Keeps only formulas whose rendering is not provably compressible below
/// (log2 |tau|)^2 bits of program+time. Verdicts: Fail carries a certificate;
/// Pass means the exhaustive search ruled every lower level out; budget too
/// small for that yields PassUnconfirmed.
FilterResult uniformityFilter(KtEngine& engine, const Formula& tau, int budget,
                              const std::vector<Program>& hints = {});

/// Hand-picked tautologies over at most 4 variables used as the default
/// measurement corpus.
std::vector<Formula> toyTautologySuite();

}  // namespace peff
