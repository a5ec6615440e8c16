#include "peff/proofs.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace peff {

ProofSystemId ProofSystemId::designated(ProofSystemId baseSystem, std::string familyTag) {
    ProofSystemId id{Kind::Designated, {}, std::move(familyTag), nullptr, {}};
    id.base = std::make_shared<ProofSystemId>(std::move(baseSystem));
    return id;
}

std::string ProofSystemId::name() const {
    switch (kind) {
        case Kind::TT: return "TT";
        case Kind::Res: return "Res";
        case Kind::ER: return "ER";
        case Kind::Trace: return "Trace";
        case Kind::Designated: return "Designated(" + (base ? base->name() : std::string("?")) + "," + familyTag + ")";
        case Kind::Record: return "Record(" + deciderTag + ")";
    }
    return "?";
}

std::optional<ProofSystemId> ProofSystemId::parseName(const std::string& name) {
    if (name == "TT") return tt();
    if (name == "Res") return res();
    if (name == "ER") return er();
    if (name == "PS" || name == "Trace") return trace();
    if (name.rfind("Designated(", 0) == 0 && name.back() == ')') {
        std::string inner = name.substr(7, name.size() - 8);
        auto comma = inner.find(',');
        if (comma == std::string::npos) return std::nullopt;
        auto base = parseName(inner.substr(0, comma));
        if (!base) return std::nullopt;
        return designated(*base, inner.substr(comma + 1));
    }
    if (name.rfind("Record(", 0) == 0 && name.back() == ')')
        return record(name.substr(7, name.size() - 8));
    return std::nullopt;
}

const char* rejectReasonName(RejectReason r) {
    switch (r) {
        case RejectReason::None: return "none";
        case RejectReason::BadFormulaSection: return "bad-formula-section";
        case RejectReason::BadPadding: return "bad-padding";
        case RejectReason::NonTautology: return "non-tautology";
        case RejectReason::BadClauseEncoding: return "bad-clause-encoding";
        case RejectReason::UnresolvableLine: return "unresolvable-line";
        case RejectReason::BadExtension: return "bad-extension";
        case RejectReason::MissingEmptyClause: return "missing-empty-clause";
        case RejectReason::TraceDivergence: return "trace-divergence";
        case RejectReason::BadEventEncoding: return "bad-event-encoding";
        case RejectReason::FamilyOutOfRange: return "family-out-of-range";
        case RejectReason::UnknownFamily: return "unknown-family";
        case RejectReason::UnknownDecider: return "unknown-decider";
        case RejectReason::RecordMismatch: return "record-mismatch";
        case RejectReason::TrailingBits: return "trailing-bits";
    }
    return "?";
}

void appendFormulaSection(Bits& out, const Formula& f) {
    out.appendAscii(f.render());
    appendUint(out, 0, 8);
}

std::optional<Formula> readFormulaSection(BitReader& reader) {
    std::string text;
    while (true) {
        std::uint64_t byte;
        if (!reader.readUint(8, byte)) return std::nullopt;
        if (byte == 0) break;
        text.push_back(static_cast<char>(byte));
        if (text.size() > 1'000'000) return std::nullopt;
    }
    if (text.empty()) return std::nullopt;
    try {
        Formula f = Formula::parse(text);
        if (f.render() != text) return std::nullopt;  // only the canonical rendering is accepted
        return f;
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

// --- resolution --------------------------------------------------------------

std::optional<Clause> resolveClauses(const Clause& c1, const Clause& c2, int pivot, ResolveError* err) {
    if (err) *err = ResolveError::None;
    if (pivot <= 0 || std::find(c1.begin(), c1.end(), pivot) == c1.end() ||
        std::find(c2.begin(), c2.end(), -pivot) == c2.end()) {
        if (err) *err = ResolveError::PivotMissing;
        return std::nullopt;
    }
    Clause merged;
    merged.reserve(c1.size() + c2.size());
    for (int l : c1)
        if (l != pivot) merged.push_back(l);
    for (int l : c2)
        if (l != -pivot) merged.push_back(l);
    auto norm = normalizeClause(std::move(merged));
    if (!norm) {
        if (err) *err = ResolveError::Tautological;
        return std::nullopt;
    }
    return norm;
}

std::vector<Clause> ResolutionProof::allLines() const {
    std::vector<Clause> lines = target.clauses();
    for (const auto& ext : extensions) {
        lines.push_back({-ext.newVar, ext.lit1});
        lines.push_back({-ext.newVar, ext.lit2});
        auto norm = normalizeClause({ext.newVar, -ext.lit1, -ext.lit2});
        lines.push_back(norm ? *norm : Clause{});
    }
    lines.insert(lines.end(), derived.begin(), derived.end());
    return lines;
}

bool checkResolutionProof(const ResolutionProof& proof, RejectReason* reason) {
    auto fail = [&](RejectReason r) {
        if (reason) *reason = r;
        return false;
    };
    int universe = proof.target.varCount();
    for (std::size_t k = 0; k < proof.extensions.size(); ++k) {
        const auto& ext = proof.extensions[k];
        if (ext.newVar != universe + 1) return fail(RejectReason::BadExtension);
        int v1 = std::abs(ext.lit1), v2 = std::abs(ext.lit2);
        if (v1 >= v2 || v1 < 1 || v2 > universe) return fail(RejectReason::BadExtension);
        universe = ext.newVar;
    }
    if (proof.derived.size() != proof.steps.size()) return fail(RejectReason::UnresolvableLine);
    std::vector<Clause> lines = proof.target.clauses();
    for (const auto& ext : proof.extensions) {
        lines.push_back(*normalizeClause({-ext.newVar, ext.lit1}));
        lines.push_back(*normalizeClause({-ext.newVar, ext.lit2}));
        lines.push_back(*normalizeClause({ext.newVar, -ext.lit1, -ext.lit2}));
    }
    for (std::size_t i = 0; i < proof.derived.size(); ++i) {
        const auto& step = proof.steps[i];
        int bound = static_cast<int>(lines.size());
        if (step.fromA < 0 || step.fromA >= bound || step.fromB < 0 || step.fromB >= bound)
            return fail(RejectReason::UnresolvableLine);
        auto r = resolveClauses(lines[step.fromA], lines[step.fromB], step.pivot);
        if (!r || *r != proof.derived[i]) return fail(RejectReason::UnresolvableLine);
        lines.push_back(proof.derived[i]);
    }
    bool hasEmptyInput = false;
    for (const auto& c : proof.target.clauses())
        if (c.empty()) hasEmptyInput = true;
    if (proof.derived.empty() ? !hasEmptyInput : !proof.derived.back().empty())
        return fail(RejectReason::MissingEmptyClause);
    if (reason) *reason = RejectReason::None;
    return true;
}

static void appendLiteral(Bits& out, int lit) {
    out.push(lit < 0);
    appendGamma(out, static_cast<std::uint64_t>(std::abs(lit)));
}

Bits encodeClause(const Clause& c) {
    Bits out;
    appendGamma(out, c.size() + 1);
    for (int lit : c) appendLiteral(out, lit);
    return out;
}

static std::optional<Clause> decodeClause(BitReader& reader, int maxVar) {
    std::uint64_t w1;
    if (!reader.readGamma(w1)) return std::nullopt;
    std::size_t width = static_cast<std::size_t>(w1 - 1);
    if (width > static_cast<std::size_t>(maxVar)) return std::nullopt;
    Clause c;
    int prevVar = 0;
    for (std::size_t i = 0; i < width; ++i) {
        bool neg;
        std::uint64_t var;
        if (!reader.readBit(neg) || !reader.readGamma(var)) return std::nullopt;
        if (var <= static_cast<std::uint64_t>(prevVar) || var > static_cast<std::uint64_t>(maxVar))
            return std::nullopt;  // variables strictly increasing keeps clauses canonical
        prevVar = static_cast<int>(var);
        c.push_back(neg ? -prevVar : prevVar);
    }
    return c;
}

Bits encodeResSection(const ResolutionProof& proof) {
    Bits out;
    appendGamma(out, proof.derived.size() + 1);
    for (const auto& c : proof.derived) out.append(encodeClause(c));
    return out;
}

Bits encodeErSection(const ResolutionProof& proof) {
    Bits out;
    appendGamma(out, proof.extensions.size() + 1);
    for (const auto& ext : proof.extensions) {
        appendLiteral(out, ext.lit1);
        appendLiteral(out, ext.lit2);
    }
    out.append(encodeResSection(proof));
    return out;
}

std::optional<ResolutionProof> decodeDerivation(BitReader& reader, const Cnf& target, bool allowExtensions,
                                                RejectReason* reason) {
    auto fail = [&](RejectReason r) {
        if (reason) *reason = r;
        return std::optional<ResolutionProof>{};
    };
    ResolutionProof proof;
    proof.target = target;
    int universe = target.varCount();
    if (allowExtensions) {
        std::uint64_t e1;
        if (!reader.readGamma(e1)) return fail(RejectReason::BadExtension);
        std::uint64_t extCount = e1 - 1;
        if (extCount > 100000) return fail(RejectReason::BadExtension);
        for (std::uint64_t k = 0; k < extCount; ++k) {
            bool neg1, neg2;
            std::uint64_t v1, v2;
            if (!reader.readBit(neg1) || !reader.readGamma(v1) || !reader.readBit(neg2) || !reader.readGamma(v2))
                return fail(RejectReason::BadExtension);
            if (v1 < 1 || v2 <= v1 || v2 > static_cast<std::uint64_t>(universe))
                return fail(RejectReason::BadExtension);
            ExtensionDef ext{universe + 1, neg1 ? -static_cast<int>(v1) : static_cast<int>(v1),
                             neg2 ? -static_cast<int>(v2) : static_cast<int>(v2)};
            proof.extensions.push_back(ext);
            universe = ext.newVar;
        }
    }
    std::uint64_t d1;
    if (!reader.readGamma(d1)) return fail(RejectReason::BadClauseEncoding);
    std::uint64_t derivedCount = d1 - 1;
    if (derivedCount > 5'000'000) return fail(RejectReason::BadClauseEncoding);

    std::vector<Clause> lines = proof.allLines();
    // Polarity index: lines containing +v / -v, for pivot-driven lookup.
    std::vector<std::vector<int>> pos(universe + 1), neg(universe + 1);
    auto indexLine = [&](int idx) {
        for (int lit : lines[idx]) (lit > 0 ? pos[lit] : neg[-lit]).push_back(idx);
    };
    for (std::size_t i = 0; i < lines.size(); ++i) indexLine(static_cast<int>(i));

    for (std::uint64_t i = 0; i < derivedCount; ++i) {
        auto clause = decodeClause(reader, universe);
        if (!clause) return fail(RejectReason::BadClauseEncoding);
        // Reconstruct some (a, b, pivot) justifying this clause: both parents
        // shrink into the resolvent, so only lines over vars(clause)+pivot fit.
        std::vector<int8_t> inClause(universe + 1, 0);
        for (int lit : *clause) inClause[std::abs(lit)] = lit > 0 ? 1 : -1;
        auto fits = [&](const Clause& parent, int pivotLit) {
            for (int lit : parent) {
                if (lit == pivotLit) continue;
                if (inClause[std::abs(lit)] != (lit > 0 ? 1 : -1)) return false;
            }
            return true;
        };
        bool found = false;
        ResolutionStep step{};
        for (int p = 1; p <= universe && !found; ++p) {
            if (inClause[p] != 0) continue;  // the pivot vanishes from the resolvent
            for (int a : pos[p]) {
                if (!fits(lines[a], p)) continue;
                for (int b : neg[p]) {
                    if (a == b || !fits(lines[b], -p)) continue;
                    auto r = resolveClauses(lines[a], lines[b], p);
                    if (r && *r == *clause) {
                        step = {a, b, p};
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
        }
        if (!found) return fail(RejectReason::UnresolvableLine);
        proof.derived.push_back(*clause);
        proof.steps.push_back(step);
        lines.push_back(std::move(*clause));
        indexLine(static_cast<int>(lines.size()) - 1);
    }
    bool hasEmptyInput = false;
    for (const auto& c : target.clauses())
        if (c.empty()) hasEmptyInput = true;
    if (proof.derived.empty() ? !hasEmptyInput : !proof.derived.back().empty())
        return fail(RejectReason::MissingEmptyClause);
    if (reason) *reason = RejectReason::None;
    return proof;
}

Bits resProofBits(const Formula& tau, const ResolutionProof& proof) {
    Bits out;
    appendFormulaSection(out, tau);
    out.append(encodeResSection(proof));
    return out;
}

Bits erProofBits(const Formula& tau, const ResolutionProof& proof) {
    Bits out;
    appendFormulaSection(out, tau);
    out.append(encodeErSection(proof));
    return out;
}

Bits embedRInEr(const Formula& tau, const ResolutionProof& proof) {
    if (!proof.extensions.empty()) throw std::invalid_argument("embedding expects an extension-free refutation");
    return erProofBits(tau, proof);
}

std::string resProofToText(const ResolutionProof& proof) {
    std::ostringstream out;
    auto printClause = [&](const Clause& c) {
        if (c.empty()) {
            out << "[]";
            return;
        }
        bool first = true;
        for (int lit : c) {
            if (!first) out << ' ';
            first = false;
            if (lit < 0) out << '~';
            out << 'x' << std::abs(lit);
        }
    };
    int idx = 0;
    for (const auto& c : proof.target.clauses()) {
        out << idx++ << ": ";
        printClause(c);
        out << " <- input\n";
    }
    for (std::size_t k = 0; k < proof.extensions.size(); ++k) {
        const auto& ext = proof.extensions[k];
        out << "# ext x" << ext.newVar << " := " << (ext.lit1 < 0 ? "~" : "") << 'x' << std::abs(ext.lit1)
            << " & " << (ext.lit2 < 0 ? "~" : "") << 'x' << std::abs(ext.lit2) << '\n';
        std::vector<Clause> defs = {*normalizeClause({-ext.newVar, ext.lit1}),
                                    *normalizeClause({-ext.newVar, ext.lit2}),
                                    *normalizeClause({ext.newVar, -ext.lit1, -ext.lit2})};
        for (const auto& d : defs) {
            out << idx++ << ": ";
            printClause(d);
            out << " <- ext " << k << '\n';
        }
    }
    for (std::size_t i = 0; i < proof.derived.size(); ++i) {
        out << idx++ << ": ";
        printClause(proof.derived[i]);
        out << " <- " << proof.steps[i].fromA << ' ' << proof.steps[i].fromB << " x" << proof.steps[i].pivot
            << '\n';
    }
    return out.str();
}

// --- restriction -------------------------------------------------------------

namespace {

enum class LineFate { Satisfied, Alive };

struct RestrictedLine {
    LineFate fate;
    int newIndex = -1;  // into the rebuilt line list when alive
};

int litValueUnder(const std::map<int, bool>& rho, int lit) {
    auto it = rho.find(std::abs(lit));
    if (it == rho.end()) return 0;
    return (lit > 0) == it->second ? 1 : -1;
}

std::optional<Clause> restrictClause(const Clause& c, const std::map<int, bool>& rho) {
    Clause out;
    for (int lit : c) {
        int v = litValueUnder(rho, lit);
        if (v == 1) return std::nullopt;  // satisfied
        if (v == 0) out.push_back(lit);
    }
    return out;
}

}  // namespace

Cnf restrictCnf(const Cnf& c, const std::map<int, bool>& rho) {
    Cnf out(c.varCount());
    for (const auto& clause : c.clauses()) {
        auto r = restrictClause(clause, rho);
        if (r) out.addClause(std::move(*r));
    }
    return out;
}

ResolutionProof restrictProof(const ResolutionProof& proof, const std::map<int, bool>& rho) {
    for (const auto& ext : proof.extensions) {
        if (rho.count(std::abs(ext.lit1)) || rho.count(std::abs(ext.lit2)) || rho.count(ext.newVar))
            throw std::invalid_argument("restriction touching extension definitions is not supported");
    }
    for (const auto& [var, _] : rho)
        if (var < 1 || var > proof.target.varCount())
            throw std::invalid_argument("restricted variable outside the target");

    ResolutionProof out;
    out.target = restrictCnf(proof.target, rho);
    out.extensions = proof.extensions;

    std::vector<Clause> newLines = out.allLines();
    std::vector<RestrictedLine> fate;
    // Original inputs.
    int kept = 0;
    for (const auto& clause : proof.target.clauses()) {
        if (restrictClause(clause, rho))
            fate.push_back({LineFate::Alive, kept++});
        else
            fate.push_back({LineFate::Satisfied});
    }
    // Extension definition lines keep their relative positions.
    int extLineBase = kept;
    for (std::size_t i = 0; i < 3 * proof.extensions.size(); ++i)
        fate.push_back({LineFate::Alive, extLineBase + static_cast<int>(i)});

    auto clauseOf = [&](int newIndex) -> const Clause& { return newLines[newIndex]; };

    for (std::size_t i = 0; i < proof.derived.size(); ++i) {
        const auto& step = proof.steps[i];
        int pv = litValueUnder(rho, step.pivot);
        RestrictedLine entry{};
        if (pv != 0) {
            // One parent is satisfied through the pivot; the other one shrinks
            // into (a subset of) the restricted resolvent.
            const RestrictedLine& carrier = pv > 0 ? fate[step.fromB] : fate[step.fromA];
            entry = carrier;
        } else if (fate[step.fromA].fate == LineFate::Satisfied) {
            entry = {LineFate::Satisfied};
        } else if (fate[step.fromB].fate == LineFate::Satisfied) {
            entry = {LineFate::Satisfied};
        } else if (std::find(clauseOf(fate[step.fromA].newIndex).begin(), clauseOf(fate[step.fromA].newIndex).end(),
                             step.pivot) == clauseOf(fate[step.fromA].newIndex).end()) {
            // The repaired parent already lost the pivot and subsumes the resolvent.
            entry = fate[step.fromA];
        } else if (std::find(clauseOf(fate[step.fromB].newIndex).begin(), clauseOf(fate[step.fromB].newIndex).end(),
                             -step.pivot) == clauseOf(fate[step.fromB].newIndex).end()) {
            entry = fate[step.fromB];
        } else {
            const Clause& a = clauseOf(fate[step.fromA].newIndex);
            const Clause& b = clauseOf(fate[step.fromB].newIndex);
            auto r = resolveClauses(a, b, step.pivot);
            if (!r) throw std::logic_error("restriction produced an invalid step");
            // Skip steps that merely re-derive an existing line.
            int existing = -1;
            for (std::size_t k = 0; k < newLines.size(); ++k)
                if (newLines[k] == *r) {
                    existing = static_cast<int>(k);
                    break;
                }
            if (existing >= 0) {
                entry = {LineFate::Alive, existing};
            } else {
                out.derived.push_back(*r);
                out.steps.push_back({fate[step.fromA].newIndex, fate[step.fromB].newIndex, step.pivot});
                newLines.push_back(*r);
                entry = {LineFate::Alive, static_cast<int>(newLines.size()) - 1};
            }
        }
        fate.push_back(entry);
    }

    // When the restriction empties an input clause the target refutes itself.
    for (const auto& clause : out.target.clauses()) {
        if (clause.empty()) {
            out.derived.clear();
            out.steps.clear();
            return out;
        }
    }
    // Truncate at the first empty derived clause; everything later is unused.
    for (std::size_t i = 0; i < out.derived.size(); ++i) {
        if (out.derived[i].empty()) {
            out.derived.resize(i + 1);
            out.steps.resize(i + 1);
            break;
        }
    }
    return out;
}

// --- whole proofs ------------------------------------------------------------

std::uint64_t ttPaddingLength(const Formula& tau) {
    int n = tau.varCount();
    if (n > 62) throw std::invalid_argument("too many variables for a truth-table proof");
    return 1ULL << n;
}

Bits ttProofBits(const Formula& tau) {
    Bits out;
    appendFormulaSection(out, tau);
    out.append(Bits::ones(ttPaddingLength(tau)));
    return out;
}

Decider bruteForceDecider(int varCap) {
    Decider d;
    d.tag = "taut-bruteforce";
    d.decide = [varCap](const Formula& f) { return isTautologyBruteforce(f, varCap).isTautology; };
    d.record = [varCap](const Formula& f) {
        int n = f.varCount();
        if (n > varCap) throw std::invalid_argument("variable count exceeds decider cap");
        Bits out;
        bool all = true;
        for (std::uint64_t idx = 0; idx < (1ULL << n); ++idx) {
            bool v = evaluate(f, Assignment::fromIndex(idx, n));
            all = all && v;
            out.push(v);
        }
        out.push(all);
        return out;
    };
    return d;
}

std::optional<Bits> makeProof(const ProofSystemId& P, const Formula& tau, const VerifierContext& ctx) {
    switch (P.kind) {
        case ProofSystemId::Kind::TT: return ttProofBits(tau);
        case ProofSystemId::Kind::Res: {
            auto ref = canonicalRefutation(negateToCnf(tau));
            if (ref.status != RefutationResult::Status::Refuted) return std::nullopt;
            return resProofBits(tau, ref.proof);
        }
        case ProofSystemId::Kind::ER: {
            auto ref = canonicalRefutation(negateToCnf(tau));
            if (ref.status != RefutationResult::Status::Refuted) return std::nullopt;
            return erProofBits(tau, ref.proof);
        }
        case ProofSystemId::Kind::Trace: {
            auto res = dpllSolve(negateToCnf(tau));
            if (res.status != DpllResult::Status::Unsat) return std::nullopt;
            return psProofBits(tau, res.trace);
        }
        case ProofSystemId::Kind::Designated: {
            if (ctx.families) {
                const FamilySpec* fam = ctx.families->find(P.familyTag);
                if (fam) {
                    for (int n = 1; n <= fam->maxIndex; ++n)
                        if (fam->instance(n).identical(tau)) return Bits::ones(n);
                }
            }
            return P.base ? makeProof(*P.base, tau, ctx) : std::nullopt;
        }
        case ProofSystemId::Kind::Record: {
            Decider d = bruteForceDecider();
            if (ctx.deciders) {
                auto it = ctx.deciders->find(P.deciderTag);
                if (it != ctx.deciders->end()) d = it->second;
            } else if (P.deciderTag != d.tag) {
                return std::nullopt;
            }
            if (!d.decide(tau)) return std::nullopt;
            Bits out;
            appendFormulaSection(out, tau);
            out.append(d.record(tau));
            return out;
        }
    }
    return std::nullopt;
}

// --- verification ------------------------------------------------------------

namespace {

VerifyResult verifyTt(BitReader& reader) {
    auto f = readFormulaSection(reader);
    if (!f) return {std::nullopt, RejectReason::BadFormulaSection};
    int n = f->varCount();
    if (n > 62) return {std::nullopt, RejectReason::BadPadding};
    std::uint64_t padLen = 1ULL << n;
    if (reader.remaining() != padLen) return {std::nullopt, RejectReason::BadPadding};
    for (std::uint64_t i = 0; i < padLen; ++i) {
        bool b;
        reader.readBit(b);
        if (!b) return {std::nullopt, RejectReason::BadPadding};
    }
    for (std::uint64_t idx = 0; idx < padLen; ++idx)
        if (!evaluate(*f, Assignment::fromIndex(idx, n))) return {std::nullopt, RejectReason::NonTautology};
    return {*f, RejectReason::None};
}

VerifyResult verifyResolution(BitReader& reader, bool allowExtensions) {
    auto f = readFormulaSection(reader);
    if (!f) return {std::nullopt, RejectReason::BadFormulaSection};
    Cnf target = negateToCnf(*f);
    RejectReason reason = RejectReason::None;
    auto proof = decodeDerivation(reader, target, allowExtensions, &reason);
    if (!proof) return {std::nullopt, reason};
    if (!reader.done()) return {std::nullopt, RejectReason::TrailingBits};
    return {*f, RejectReason::None};
}

VerifyResult verifyPs(BitReader& reader) {
    auto f = readFormulaSection(reader);
    if (!f) return {std::nullopt, RejectReason::BadFormulaSection};
    Cnf cnf = negateToCnf(*f);
    std::size_t remaining = reader.remaining();
    // A genuine trace with B events costs at most (B+1)(m+1)+B solver work and
    // encodes at least 2 bits per event, so a budget in O(|w| * m) suffices to
    // replay any trace the remaining bits could possibly encode.
    std::uint64_t cap = (static_cast<std::uint64_t>(remaining) / 2 + 2) *
                            (static_cast<std::uint64_t>(cnf.clauses().size()) + 2) +
                        64;
    std::uint64_t used = 0;
    auto charge = [&](std::uint64_t k) {
        used += k;
        return used <= cap;
    };
    DpllResult res = dpllSolve(cnf, charge);
    if (res.status == DpllResult::Status::Sat) return {std::nullopt, RejectReason::NonTautology};
    if (res.status == DpllResult::Status::Aborted) return {std::nullopt, RejectReason::TraceDivergence};
    Bits genuine = traceBits(res.trace);
    Bits provided;
    reader.readBits(remaining, provided);
    if (genuine != provided) return {std::nullopt, RejectReason::TraceDivergence};
    return {*f, RejectReason::None};
}

VerifyResult verifyRecord(BitReader& reader, const ProofSystemId& P, const VerifierContext& ctx) {
    auto f = readFormulaSection(reader);
    if (!f) return {std::nullopt, RejectReason::BadFormulaSection};
    Decider stock = bruteForceDecider();
    const Decider* d = nullptr;
    if (ctx.deciders) {
        auto it = ctx.deciders->find(P.deciderTag);
        if (it != ctx.deciders->end()) d = &it->second;
    }
    if (!d && P.deciderTag == stock.tag) d = &stock;
    if (!d) return {std::nullopt, RejectReason::UnknownDecider};
    int n = f->varCount();
    if (n > 24 || reader.remaining() != (1ULL << n) + 1)
        return {std::nullopt, RejectReason::RecordMismatch};
    Bits provided;
    reader.readBits(reader.remaining(), provided);
    Bits genuine;
    try {
        genuine = d->record(*f);
    } catch (const std::exception&) {
        return {std::nullopt, RejectReason::RecordMismatch};
    }
    if (genuine != provided) return {std::nullopt, RejectReason::RecordMismatch};
    if (!provided.at(provided.size() - 1)) return {std::nullopt, RejectReason::NonTautology};
    return {*f, RejectReason::None};
}

}  // namespace

VerifyResult verify(const ProofSystemId& P, const Bits& w, const VerifierContext& ctx) {
    BitReader reader(w);
    switch (P.kind) {
        case ProofSystemId::Kind::TT: return verifyTt(reader);
        case ProofSystemId::Kind::Res: return verifyResolution(reader, false);
        case ProofSystemId::Kind::ER: return verifyResolution(reader, true);
        case ProofSystemId::Kind::Trace: return verifyPs(reader);
        case ProofSystemId::Kind::Designated: {
            bool allOnes = !w.empty();
            for (std::size_t i = 0; i < w.size() && allOnes; ++i)
                if (!w.at(i)) allOnes = false;
            if (allOnes) {
                if (!ctx.families) return {std::nullopt, RejectReason::UnknownFamily};
                const FamilySpec* fam = ctx.families->find(P.familyTag);
                if (!fam) return {std::nullopt, RejectReason::UnknownFamily};
                int n = static_cast<int>(w.size());
                if (n > fam->maxIndex) return {std::nullopt, RejectReason::FamilyOutOfRange};
                return {fam->instance(n), RejectReason::None};
            }
            if (!P.base) return {std::nullopt, RejectReason::BadFormulaSection};
            return verify(*P.base, w, ctx);
        }
        case ProofSystemId::Kind::Record: return verifyRecord(reader, P, ctx);
    }
    return {std::nullopt, RejectReason::BadFormulaSection};
}

}  // namespace peff
