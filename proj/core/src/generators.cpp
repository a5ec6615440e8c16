#include "peff/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace peff {

using nlohmann::json;

void FamilyRegistry::add(FamilySpec spec, int checkUpTo) {
    int upTo = std::min(checkUpTo, spec.maxIndex);
    for (int n = 1; n <= upTo; ++n) {
        Formula f = spec.instance(n);
        if (f.varCount() > 20) break;
        auto verdict = isTautologyBruteforce(f);
        if (!verdict.isTautology)
            throw std::invalid_argument("family instance " + std::to_string(n) + " of '" + spec.tag +
                                        "' is not a tautology");
    }
    families_[spec.tag] = std::move(spec);
}

const FamilySpec* FamilyRegistry::find(const std::string& tag) const {
    auto it = families_.find(tag);
    return it == families_.end() ? nullptr : &it->second;
}

ProofSystemId genDesignatedFamily(const ProofSystemId& base, const std::string& familyTag,
                                  const FamilyRegistry& registry) {
    if (!registry.find(familyTag)) throw std::invalid_argument("unknown family: " + familyTag);
    return ProofSystemId::designated(base, familyTag);
}

namespace {

std::string asciiToBitString(const std::string& text) { return Bits::fromAscii(text).toString(); }

}  // namespace

void registerBuiltinFamilies(FamilyRegistry& registry, int checkUpTo) {
    FamilySpec php;
    php.tag = "php";
    php.instance = [](int n) { return phpTautology(n); };
    php.seedSource = "phptaut <n>";
    php.maxIndex = 16;
    registry.add(php, checkUpTo);

    FamilySpec orchain;
    orchain.tag = "orchain";
    orchain.instance = [](int n) {
        std::vector<Formula> parts{Formula::var(1), Formula::negation(Formula::var(1))};
        for (int i = 0; i < n; ++i) parts.push_back(Formula::var(1));
        return Formula::disjunction(std::move(parts));
    };
    orchain.seedSource =
        "emit " + asciiToBitString("(x1 | ~x1") + " repeat <n> " + asciiToBitString(" | x1") + " emit " +
        asciiToBitString(")");
    orchain.maxIndex = 64;
    registry.add(orchain, checkUpTo);
}

// --- circuits -----------------------------------------------------------------

std::vector<bool> ToyFunctionSpec::eval(const std::vector<bool>& in) const {
    if (static_cast<int>(in.size()) != inputs) throw std::invalid_argument("wrong input width");
    std::vector<bool> signals(in);
    signals.reserve(in.size() + gates.size());
    for (const auto& g : gates) {
        auto sig = [&](int ref) -> bool {
            if (ref < 1 || ref > static_cast<int>(signals.size()))
                throw std::invalid_argument("gate reference out of range");
            return signals[ref - 1];
        };
        bool a = sig(g.a);
        bool value = false;
        switch (g.op) {
            case Gate::Op::And: value = a && sig(g.b); break;
            case Gate::Op::Or: value = a || sig(g.b); break;
            case Gate::Op::Xor: value = a != sig(g.b); break;
            case Gate::Op::Not: value = !a; break;
        }
        signals.push_back(value);
    }
    std::vector<bool> out;
    out.reserve(outputs.size());
    for (int ref : outputs) {
        if (ref < 1 || ref > static_cast<int>(signals.size()))
            throw std::invalid_argument("output reference out of range");
        out.push_back(signals[ref - 1]);
    }
    return out;
}

namespace {

const char* opName(Gate::Op op) {
    switch (op) {
        case Gate::Op::And: return "and";
        case Gate::Op::Or: return "or";
        case Gate::Op::Xor: return "xor";
        case Gate::Op::Not: return "not";
    }
    return "?";
}

Gate::Op opFromName(const std::string& name) {
    if (name == "and") return Gate::Op::And;
    if (name == "or") return Gate::Op::Or;
    if (name == "xor") return Gate::Op::Xor;
    if (name == "not") return Gate::Op::Not;
    throw std::invalid_argument("unknown gate op: " + name);
}

}  // namespace

std::string ToyFunctionSpec::toJson() const {
    json j;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["gates"] = json::array();
    for (const auto& g : gates) j["gates"].push_back({{"op", opName(g.op)}, {"a", g.a}, {"b", g.b}});
    return j.dump();
}

ToyFunctionSpec ToyFunctionSpec::fromJson(const std::string& text) {
    json j = json::parse(text);
    ToyFunctionSpec spec;
    spec.inputs = j.at("inputs").get<int>();
    for (const auto& g : j.at("gates"))
        spec.gates.push_back({opFromName(g.at("op").get<std::string>()), g.at("a").get<int>(),
                              g.value("b", 0)});
    spec.outputs = j.at("outputs").get<std::vector<int>>();
    return spec;
}

ToyFunctionSpec duplicateBitsFunction(int n) {
    ToyFunctionSpec spec;
    spec.inputs = n;
    for (int i = 1; i <= n; ++i) {
        spec.outputs.push_back(i);
        spec.outputs.push_back(i);
    }
    return spec;
}

ToyFunctionSpec rotateLeftFunction(int n) {
    ToyFunctionSpec spec;
    spec.inputs = n;
    for (int i = 1; i <= n; ++i) spec.outputs.push_back(i % n + 1);
    return spec;
}

ToyFunctionSpec identityFunction(int n) {
    ToyFunctionSpec spec;
    spec.inputs = n;
    for (int i = 1; i <= n; ++i) spec.outputs.push_back(i);
    return spec;
}

ToyFunctionSpec firstBitFunction(int n) {
    ToyFunctionSpec spec;
    spec.inputs = n;
    spec.outputs.push_back(1);
    return spec;
}

ToyFunctionSpec circuitEvaluatorFunction(int k) {
    // Input: a one-gate circuit over k variables, encoded as 2 op bits and two
    // ceil(log2 k)-bit operand selectors. Output: the 2^k truth table bits.
    if (k < 1 || k > 3) throw std::invalid_argument("evaluator kept at k <= 3");
    int sel = ceilLog2(static_cast<std::uint64_t>(k));
    if (sel == 0) sel = 1;
    ToyFunctionSpec spec;
    spec.inputs = 2 + 2 * sel;

    // Signals: op1 op0, a-selector bits, b-selector bits.
    // The construction enumerates rows: for each assignment row r of the k
    // variables, the row output is a fixed boolean function of the inputs,
    // synthesized below with genuine gates.
    auto signalConst = [&](bool value) {
        // constant via x1 xor x1 (false) or its negation
        spec.gates.push_back({Gate::Op::Xor, 1, 1});
        int f = spec.inputs + static_cast<int>(spec.gates.size());
        if (!value) return f;
        spec.gates.push_back({Gate::Op::Not, f, 0});
        return spec.inputs + static_cast<int>(spec.gates.size());
    };
    auto gateAnd = [&](int a, int b) {
        spec.gates.push_back({Gate::Op::And, a, b});
        return spec.inputs + static_cast<int>(spec.gates.size());
    };
    auto gateOr = [&](int a, int b) {
        spec.gates.push_back({Gate::Op::Or, a, b});
        return spec.inputs + static_cast<int>(spec.gates.size());
    };
    auto gateNot = [&](int a) {
        spec.gates.push_back({Gate::Op::Not, a, 0});
        return spec.inputs + static_cast<int>(spec.gates.size());
    };
    auto gateXor = [&](int a, int b) {
        spec.gates.push_back({Gate::Op::Xor, a, b});
        return spec.inputs + static_cast<int>(spec.gates.size());
    };

    // selEquals(firstSelSignal, value): AND over selector bits matching value.
    auto selEquals = [&](int firstSig, int value) {
        int acc = -1;
        for (int bit = 0; bit < sel; ++bit) {
            int sig = firstSig + bit;
            int lit = ((value >> (sel - 1 - bit)) & 1) ? sig : gateNot(sig);
            acc = acc < 0 ? lit : gateAnd(acc, lit);
        }
        return acc;
    };

    for (int row = 0; row < (1 << k); ++row) {
        // Selected operand values under this row, as mux over selector values.
        auto muxOperand = [&](int firstSig) {
            int acc = signalConst(false);
            for (int v = 0; v < k; ++v) {
                bool varValue = (row >> v) & 1;
                if (!varValue) continue;  // OR of (sel==v) over true vars
                acc = gateOr(acc, selEquals(firstSig, v));
            }
            return acc;
        };
        int av = muxOperand(3);
        int bv = muxOperand(3 + sel);
        // Row result per opcode: 00 and, 01 or, 10 xor, 11 not(a).
        int rAnd = gateAnd(av, bv);
        int rOr = gateOr(av, bv);
        int rXor = gateXor(av, bv);
        int rNot = gateNot(av);
        int op1 = 1, op0 = 2;
        int nop1 = gateNot(op1), nop0 = gateNot(op0);
        int sAnd = gateAnd(gateAnd(nop1, nop0), rAnd);
        int sOr = gateAnd(gateAnd(nop1, op0), rOr);
        int sXor = gateAnd(gateAnd(op1, nop0), rXor);
        int sNot = gateAnd(gateAnd(op1, op0), rNot);
        spec.outputs.push_back(gateOr(gateOr(sAnd, sOr), gateOr(sXor, sNot)));
    }
    return spec;
}

// --- formulas from circuits -----------------------------------------------------

namespace {

// Formula for "signal ref" where gate k is represented by variable inputs+k+offsetAux.
Formula signalVar(const ToyFunctionSpec& g, int ref, int auxBase) {
    if (ref <= g.inputs) return Formula::var(ref);
    return Formula::var(auxBase + (ref - g.inputs));
}

Formula equivalence(Formula a, Formula b) {
    Formula na = Formula::negation(a);
    Formula nb = Formula::negation(b);
    return Formula::disjunction(
        {Formula::conjunction({std::move(a), std::move(b)}), Formula::conjunction({std::move(na), std::move(nb)})});
}

// Gate-consistency constraints; gate k's value is the variable auxBase + k + 1.
std::vector<Formula> gateConstraints(const ToyFunctionSpec& g, int auxBase) {
    std::vector<Formula> out;
    out.reserve(g.gates.size());
    for (std::size_t k = 0; k < g.gates.size(); ++k) {
        const Gate& gate = g.gates[k];
        Formula a = signalVar(g, gate.a, auxBase);
        Formula expr = a;
        switch (gate.op) {
            case Gate::Op::And:
                expr = Formula::conjunction({a, signalVar(g, gate.b, auxBase)});
                break;
            case Gate::Op::Or:
                expr = Formula::disjunction({a, signalVar(g, gate.b, auxBase)});
                break;
            case Gate::Op::Xor: {
                Formula b = signalVar(g, gate.b, auxBase);
                expr = Formula::disjunction({Formula::conjunction({a, Formula::negation(b)}),
                                             Formula::conjunction({Formula::negation(a), b})});
                break;
            }
            case Gate::Op::Not:
                expr = Formula::negation(a);
                break;
        }
        out.push_back(equivalence(Formula::var(auxBase + static_cast<int>(k) + 1), std::move(expr)));
    }
    return out;
}

Formula outputLiteral(const ToyFunctionSpec& g, int ref, int auxBase, bool wanted) {
    Formula sig = signalVar(g, ref, auxBase);
    return wanted ? sig : Formula::negation(std::move(sig));
}

}  // namespace

TauGResult genTauG(const ToyFunctionSpec& g, const std::vector<bool>& b) {
    if (b.size() != g.outputs.size()) throw std::invalid_argument("target width does not match g");
    if (g.inputs > 24) throw std::invalid_argument("toy range exceeded");
    for (std::uint64_t x = 0; x < (1ULL << g.inputs); ++x) {
        std::vector<bool> in(g.inputs);
        for (int i = 0; i < g.inputs; ++i) in[i] = (x >> i) & 1;
        if (g.eval(in) == b) return {std::nullopt, in};
    }
    int auxBase = g.inputs;
    std::vector<Formula> body = gateConstraints(g, auxBase);
    for (std::size_t p = 0; p < b.size(); ++p) body.push_back(outputLiteral(g, g.outputs[p], auxBase, b[p]));
    Formula conj = body.size() == 1 ? std::move(body.front()) : Formula::conjunction(std::move(body));
    return {Formula::negation(std::move(conj)), std::nullopt};
}

Formula genMuEta(const ToyFunctionSpec& h, const ToyFunctionSpec& hardBit, const std::vector<bool>& b,
                 const std::optional<Formula>& phi) {
    if (h.inputs > 20) throw std::invalid_argument("toy range exceeded");
    if (static_cast<int>(h.outputs.size()) != h.inputs)
        throw std::invalid_argument("h must be length preserving");
    if (static_cast<int>(b.size()) != h.inputs) throw std::invalid_argument("target width does not match h");

    // Exhaustive bijectivity check and preimage computation.
    std::vector<std::int64_t> seen(1ULL << h.inputs, -1);
    std::optional<std::vector<bool>> preimage;
    for (std::uint64_t x = 0; x < (1ULL << h.inputs); ++x) {
        std::vector<bool> in(h.inputs);
        for (int i = 0; i < h.inputs; ++i) in[i] = (x >> i) & 1;
        std::vector<bool> out = h.eval(in);
        std::uint64_t img = 0;
        for (int i = 0; i < h.inputs; ++i)
            if (out[i]) img |= 1ULL << i;
        if (seen[img] >= 0) throw std::invalid_argument("h is not injective");
        seen[img] = static_cast<std::int64_t>(x);
        if (out == b) preimage = in;
    }
    if (!preimage) throw std::logic_error("permutation misses a value");

    int hAuxBase = h.inputs;
    std::vector<Formula> antecedent = gateConstraints(h, hAuxBase);
    for (std::size_t p = 0; p < b.size(); ++p)
        antecedent.push_back(outputLiteral(h, h.outputs[p], hAuxBase, b[p]));

    Formula consequent = Formula::constant(true);
    if (phi) {
        if (phi->varCount() > h.inputs) throw std::invalid_argument("phi uses variables beyond x");
        consequent = *phi;
    } else {
        if (hardBit.inputs != h.inputs || hardBit.outputs.size() != 1)
            throw std::invalid_argument("hard-bit circuit must map the same inputs to one bit");
        bool c = hardBit.eval(*preimage)[0];
        int bAuxBase = h.inputs + static_cast<int>(h.gates.size());
        // Hard-bit gate constraints join the antecedent so that the implied
        // bit is about the genuine circuit value.
        for (auto& f : gateConstraints(hardBit, bAuxBase)) antecedent.push_back(std::move(f));
        consequent = outputLiteral(hardBit, hardBit.outputs[0], bAuxBase, c);
    }
    Formula ant = antecedent.size() == 1 ? std::move(antecedent.front())
                                         : Formula::conjunction(std::move(antecedent));
    return Formula::disjunction({Formula::negation(std::move(ant)), std::move(consequent)});
}

// --- compressibility filter -----------------------------------------------------

FilterResult uniformityFilter(KtEngine& engine, const Formula& tau, int budget,
                              const std::vector<Program>& hints) {
    Bits target = Bits::fromAscii(tau.render());
    double logSize = std::log2(static_cast<double>(target.size()));
    auto threshold = static_cast<std::uint64_t>(std::ceil(logSize * logSize));

    FilterResult result;
    result.thresholdLevel = threshold;

    int fullBudget = threshold == 0 ? 0 : static_cast<int>(threshold - 1);
    int searchBudget = std::min(fullBudget, 26);
    if (budget < searchBudget) searchBudget = std::max(budget, 0);

    KtResult kt = engine.kt(target, Bits{}, searchBudget, hints);
    if (static_cast<std::uint64_t>(kt.certificate.level) < threshold) {
        result.verdict = FilterVerdict::Fail;
        result.certificate = kt.certificate;
        return result;
    }
    if (!kt.exact() && kt.searchedUpTo >= fullBudget) {
        result.verdict = FilterVerdict::Pass;  // every level below the threshold is ruled out
        return result;
    }
    if (kt.exact()) {
        result.verdict = FilterVerdict::Pass;
        return result;
    }
    result.verdict = FilterVerdict::PassUnconfirmed;
    return result;
}

std::vector<Formula> toyTautologySuite() {
    static const char* kSuite[] = {
        "(x1 | ~x1)",
        "(~x1 | x1)",
        "~(x1 & ~x1)",
        "(x1 | ~x1 | x1)",
        "(x1 | ~x1 | ~x1)",
        "~(~x1 & x1)",
        "1",
        "(1 | x1)",
        "(x1 | 1)",
        "(x1 & x1 | ~x1)",
        "(x1 | ~x1 | x2)",
        "(x1 | ~x2 | x2 | ~x1)",
        "(x1 & x2 | ~x1 | ~x2)",
        "(~x1 | ~x2 | x1 & x2)",
        "(x1 -> (x2 -> x1))",
        "((x1 -> x2) -> (~x2 -> ~x1))",
        "(x1 & x2 | x1 & ~x2 | ~x1)",
        "(x1 | ~x1 | x2 & x3)",
        "(x1 & x2 & x3 | ~x1 | ~x2 | ~x3)",
        "(x1 | x2 | x3 | ~x2)",
        "(~x3 | x1 | ~x1 | x2 & x3)",
        "(x1 & x2 | x3 | ~x3 | x4 & ~x1)",
        "(x1 | ~x2 | x3 | ~x4 | x2 & x4 & ~x1 & ~x3)",
        "(x4 | ~x4 | x1 & x2 & x3)",
    };
    std::vector<Formula> suite;
    suite.reserve(std::size(kSuite));
    for (const char* text : kSuite) suite.push_back(Formula::parse(text));
    return suite;
}

}  // namespace peff
