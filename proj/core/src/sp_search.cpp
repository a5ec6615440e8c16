#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "peff/proofs.hpp"

namespace peff {

namespace {

std::uint64_t formulaSectionBits(const Formula& tau) { return 8 * (tau.render().size() + 1); }

std::string setKey(const std::vector<Clause>& derived) {
    std::ostringstream key;
    for (const auto& c : derived) {
        for (int l : c) key << l << ',';
        key << ';';
    }
    return key.str();
}

struct ResSearchOutcome {
    bool exact = false;
    std::uint64_t bits = 0;        // exact tail+formula total
    std::uint64_t lowerBound = 0;  // on the total
    std::uint64_t upperBound = 0;  // 0 = unknown
};

// Least-cost search over sets of derived clauses. The clause-content encoding
// makes the cost of a derivation independent of step order, so a state is
// fully described by which clauses have been derived.
ResSearchOutcome resMinimalBits(const Formula& tau, const Cnf& target, const SpOptions& opts) {
    ResSearchOutcome out;
    std::uint64_t base = formulaSectionBits(tau);

    for (const auto& c : target.clauses()) {
        if (c.empty()) {
            out.exact = true;
            out.bits = base + 1;  // empty derivation header
            out.lowerBound = out.upperBound = out.bits;
            return out;
        }
    }
    out.lowerBound = base + gammaLength(2) + 1;  // at least one derived clause, the empty one

    // Seed an upper bound from the stock refutation.
    std::uint64_t guard = 0;
    auto seedCharge = [&guard](std::uint64_t k) {
        guard += k;
        return guard < 20'000'000;
    };
    RefutationResult stock = canonicalRefutation(target, seedCharge);
    if (stock.status == RefutationResult::Status::Sat)
        throw std::invalid_argument("minimal proof size requested for a non-tautology");
    if (stock.status == RefutationResult::Status::Refuted)
        out.upperBound = base + encodeResSection(stock.proof).size();

    struct Node {
        std::vector<Clause> derived;  // sorted
        std::uint64_t cost;           // sum of clause bits + header growth
    };
    auto cmp = [](const std::pair<std::uint64_t, std::size_t>& a, const std::pair<std::uint64_t, std::size_t>& b) {
        return a.first > b.first;
    };
    std::priority_queue<std::pair<std::uint64_t, std::size_t>, std::vector<std::pair<std::uint64_t, std::size_t>>,
                        decltype(cmp)>
        queue(cmp);
    std::vector<Node> nodes;
    std::map<std::string, std::uint64_t> seen;

    nodes.push_back({{}, 0});
    seen[setKey({})] = 0;
    queue.push({0, 0});

    const std::vector<Clause>& inputs = target.clauses();
    std::uint64_t expanded = 0;

    while (!queue.empty()) {
        auto [cost, id] = queue.top();
        queue.pop();
        Node node = nodes[id];
        if (cost != node.cost) continue;  // stale entry
        for (const auto& c : node.derived) {
            if (c.empty()) {
                out.exact = true;
                out.bits = base + 1 + cost;  // gamma(1) closes the telescoped header
                out.lowerBound = out.upperBound = out.bits;
                return out;
            }
        }
        if (++expanded > opts.maxStates) break;
        if (base + 1 + cost > opts.capBits) break;

        std::vector<Clause> lines = inputs;
        lines.insert(lines.end(), node.derived.begin(), node.derived.end());
        std::uint64_t headerGrowth =
            gammaLength(node.derived.size() + 2) - gammaLength(node.derived.size() + 1);

        for (std::size_t a = 0; a < lines.size(); ++a) {
            for (std::size_t b = 0; b < lines.size(); ++b) {
                if (a == b) continue;
                for (int lit : lines[a]) {
                    if (lit <= 0) continue;
                    auto r = resolveClauses(lines[a], lines[b], lit);
                    if (!r) continue;
                    if (std::find(inputs.begin(), inputs.end(), *r) != inputs.end()) continue;
                    if (std::binary_search(node.derived.begin(), node.derived.end(), *r)) continue;
                    std::uint64_t edge = encodeClause(*r).size() + headerGrowth;
                    std::uint64_t nextCost = node.cost + edge;
                    if (out.upperBound && base + 1 + nextCost > out.upperBound) continue;
                    std::vector<Clause> nextSet = node.derived;
                    nextSet.insert(std::lower_bound(nextSet.begin(), nextSet.end(), *r), *r);
                    std::string key = setKey(nextSet);
                    auto it = seen.find(key);
                    if (it != seen.end() && it->second <= nextCost) continue;
                    seen[key] = nextCost;
                    nodes.push_back({std::move(nextSet), nextCost});
                    queue.push({nextCost, nodes.size() - 1});
                }
            }
        }
    }
    // Search gave out: report what is known.
    if (out.upperBound && out.upperBound < out.lowerBound) out.lowerBound = out.upperBound;
    return out;
}

}  // namespace

SpResult spExact(const ProofSystemId& P, const Formula& tau, const SpOptions& opts, const VerifierContext& ctx) {
    SpResult result;
    switch (P.kind) {
        case ProofSystemId::Kind::TT: {
            std::uint64_t value = formulaSectionBits(tau) + ttPaddingLength(tau);
            result.lowerBound = result.upperBound = value;
            if (value <= opts.capBits) {
                result.status = SpResult::Status::Exact;
                result.bits = value;
            } else {
                result.status = SpResult::Status::Unknown;
            }
            return result;
        }
        case ProofSystemId::Kind::Trace: {
            DpllResult res = dpllSolve(negateToCnf(tau));
            if (res.status != DpllResult::Status::Unsat)
                throw std::invalid_argument("minimal proof size requested for a non-tautology");
            std::uint64_t value = formulaSectionBits(tau) + traceBits(res.trace).size();
            result.lowerBound = result.upperBound = value;
            result.status = value <= opts.capBits ? SpResult::Status::Exact : SpResult::Status::Unknown;
            if (result.exact()) result.bits = value;
            return result;
        }
        case ProofSystemId::Kind::Record: {
            Decider d = bruteForceDecider();
            if (!d.decide(tau)) throw std::invalid_argument("minimal proof size requested for a non-tautology");
            std::uint64_t value = formulaSectionBits(tau) + (1ULL << tau.varCount()) + 1;
            result.lowerBound = result.upperBound = value;
            result.status = value <= opts.capBits ? SpResult::Status::Exact : SpResult::Status::Unknown;
            if (result.exact()) result.bits = value;
            return result;
        }
        case ProofSystemId::Kind::Res: {
            ResSearchOutcome out = resMinimalBits(tau, negateToCnf(tau), opts);
            if (out.exact && out.bits <= opts.capBits) {
                result.status = SpResult::Status::Exact;
                result.bits = out.bits;
                result.lowerBound = result.upperBound = out.bits;
            } else {
                result.status = SpResult::Status::Unknown;
                result.lowerBound = out.lowerBound;
                result.upperBound = out.upperBound;
            }
            return result;
        }
        case ProofSystemId::Kind::ER: {
            // The extension-free value upper-bounds the true minimum; extension
            // moves are not searched, so exactness is never claimed.
            Cnf target = negateToCnf(tau);
            bool emptyInput = false;
            for (const auto& c : target.clauses())
                if (c.empty()) emptyInput = true;
            ResSearchOutcome res = resMinimalBits(tau, target, opts);
            result.status = SpResult::Status::Unknown;
            result.lowerBound = formulaSectionBits(tau) + (emptyInput ? 2 : 5);
            if (res.exact)
                result.upperBound = res.bits + 1;
            else if (res.upperBound)
                result.upperBound = res.upperBound + 1;
            return result;
        }
        case ProofSystemId::Kind::Designated: {
            std::optional<int> designated;
            if (ctx.families) {
                const FamilySpec* fam = ctx.families->find(P.familyTag);
                if (fam) {
                    for (int n = 1; n <= fam->maxIndex; ++n)
                        if (fam->instance(n).identical(tau)) {
                            designated = n;
                            break;
                        }
                }
            }
            SpResult baseResult = P.base ? spExact(*P.base, tau, opts, ctx) : SpResult{};
            if (!designated) return baseResult;
            std::uint64_t unary = static_cast<std::uint64_t>(*designated);
            if (baseResult.exact()) {
                result.status = SpResult::Status::Exact;
                result.bits = std::min(unary, baseResult.bits);
                result.lowerBound = result.upperBound = result.bits;
            } else if (unary <= baseResult.lowerBound) {
                result.status = SpResult::Status::Exact;
                result.bits = unary;
                result.lowerBound = result.upperBound = unary;
            } else {
                result.status = SpResult::Status::Unknown;
                result.lowerBound = std::min(unary, baseResult.lowerBound);
                result.upperBound = baseResult.upperBound ? std::min(unary, baseResult.upperBound) : unary;
            }
            return result;
        }
    }
    throw std::logic_error("unhandled proof system");
}

}  // namespace peff
