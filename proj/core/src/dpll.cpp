#include <algorithm>
#include <cstdlib>

#include "peff/proofs.hpp"

namespace peff {

namespace {

// Shared propagation core. Clauses are scanned in index order; after every
// assignment the scan restarts at clause 0, so the event order is a function
// of the clause set alone.
struct Propagator {
    const Cnf& cnf;
    const WorkCharge& charge;
    std::vector<int8_t> val;  // 1 true, -1 false, 0 unassigned

    Propagator(const Cnf& c, const WorkCharge& ch) : cnf(c), charge(ch), val(c.varCount() + 1, 0) {}

    bool spend(std::uint64_t k) { return !charge || charge(k); }

    int litValue(int lit) const {
        int8_t v = val[std::abs(lit)];
        if (v == 0) return 0;
        return (lit > 0) == (v > 0) ? 1 : -1;
    }

    void assign(int lit) { val[std::abs(lit)] = lit > 0 ? 1 : -1; }
    void unassign(int var) { val[var] = 0; }

    enum class Scan { Quiet, Propagated, Conflict, OutOfBudget };

    // One pass from clause 0: reports the first falsified clause, else
    // propagates the first unit found.
    Scan scanOnce(int& clauseIdx, int& unitLit) {
        const auto& clauses = cnf.clauses();
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            if (!spend(1)) return Scan::OutOfBudget;
            int unassigned = 0;
            int candidate = 0;
            bool satisfied = false;
            for (int lit : clauses[i]) {
                int v = litValue(lit);
                if (v == 1) {
                    satisfied = true;
                    break;
                }
                if (v == 0) {
                    ++unassigned;
                    candidate = lit;
                    if (unassigned > 1) break;
                }
            }
            if (satisfied) continue;
            if (unassigned == 0) {
                clauseIdx = static_cast<int>(i);
                return Scan::Conflict;
            }
            if (unassigned == 1) {
                clauseIdx = static_cast<int>(i);
                unitLit = candidate;
                return Scan::Propagated;
            }
        }
        return Scan::Quiet;
    }

    int smallestUnassigned() const {
        for (int v = 1; v <= cnf.varCount(); ++v)
            if (val[v] == 0) return v;
        return 0;
    }
};

}  // namespace

DpllResult dpllSolve(const Cnf& cnf, const WorkCharge& charge) {
    Propagator prop(cnf, charge);
    DpllResult result;
    result.status = DpllResult::Status::Aborted;

    struct TrailEntry {
        int var;
        bool decision;  // decision at its first (false) branch; flipped entries are not
    };
    std::vector<TrailEntry> trail;
    auto emit = [&](DpllEvent e) { result.trace.events.push_back(e); };

    while (true) {
        // Propagate to fixpoint.
        int clauseIdx = 0, unitLit = 0;
        Propagator::Scan s;
        while ((s = prop.scanOnce(clauseIdx, unitLit)) == Propagator::Scan::Propagated) {
            if (!prop.spend(1)) return result;
            prop.assign(unitLit);
            trail.push_back({std::abs(unitLit), false});
            emit({DpllEvent::Type::Propagate, clauseIdx});
        }
        if (s == Propagator::Scan::OutOfBudget) return result;
        if (s == Propagator::Scan::Conflict) {
            emit({DpllEvent::Type::Conflict, clauseIdx});
            // Pop to the deepest first-branch decision and flip it.
            while (!trail.empty() && !trail.back().decision) {
                prop.unassign(trail.back().var);
                trail.pop_back();
            }
            if (trail.empty()) {
                emit({DpllEvent::Type::Exhaust, -1});
                result.status = DpllResult::Status::Unsat;
                return result;
            }
            int v = trail.back().var;
            trail.back().decision = false;
            prop.val[v] = 1;  // second branch
            emit({DpllEvent::Type::Flip, -1});
            continue;
        }
        int v = prop.smallestUnassigned();
        if (v == 0) {
            Assignment model(cnf.varCount());
            for (int i = 1; i <= cnf.varCount(); ++i) model.set(i, prop.val[i] > 0);
            result.status = DpllResult::Status::Sat;
            result.model = model;
            result.trace.events.clear();
            return result;
        }
        if (!prop.spend(1)) return result;
        prop.val[v] = -1;  // false branch first
        trail.push_back({v, true});
        emit({DpllEvent::Type::Decide, -1});
    }
}

Bits traceBits(const DpllTrace& trace) {
    Bits out;
    for (const auto& e : trace.events) {
        switch (e.type) {
            case DpllEvent::Type::Decide:
                out.push(false);
                out.push(false);
                break;
            case DpllEvent::Type::Propagate:
                out.push(false);
                out.push(true);
                appendGamma(out, static_cast<std::uint64_t>(e.clauseIdx) + 1);
                break;
            case DpllEvent::Type::Conflict:
                out.push(true);
                out.push(false);
                appendGamma(out, static_cast<std::uint64_t>(e.clauseIdx) + 1);
                break;
            case DpllEvent::Type::Flip:
                out.push(true);
                out.push(true);
                out.push(false);
                break;
            case DpllEvent::Type::Exhaust:
                out.push(true);
                out.push(true);
                out.push(true);
                break;
        }
    }
    return out;
}

std::string traceToText(const DpllTrace& trace) {
    std::string out;
    for (const auto& e : trace.events) {
        switch (e.type) {
            case DpllEvent::Type::Decide: out += "decide\n"; break;
            case DpllEvent::Type::Propagate: out += "propagate " + std::to_string(e.clauseIdx) + "\n"; break;
            case DpllEvent::Type::Conflict: out += "conflict " + std::to_string(e.clauseIdx) + "\n"; break;
            case DpllEvent::Type::Flip: out += "flip\n"; break;
            case DpllEvent::Type::Exhaust: out += "exhausted\n"; break;
        }
    }
    return out;
}

Bits psProofBits(const Formula& tau, const DpllTrace& trace) {
    Bits out;
    appendFormulaSection(out, tau);
    out.append(traceBits(trace));
    return out;
}

namespace {

struct Deriver {
    Propagator prop;
    ResolutionProof proof;
    std::vector<Clause> lines;  // inputs then derived, by line index
    bool aborted = false;
    bool satisfiable = false;

    Deriver(const Cnf& cnf, const WorkCharge& charge) : prop(cnf, charge) {
        proof.target = cnf;
        lines = cnf.clauses();
    }

    int addDerived(Clause c, int fromA, int fromB, int pivot) {
        proof.derived.push_back(c);
        proof.steps.push_back({fromA, fromB, pivot});
        lines.push_back(std::move(c));
        return static_cast<int>(lines.size()) - 1;
    }

    struct Out {
        Clause clause;
        int line;
    };

    // Eliminates this level's propagated literals from (clause, line) by
    // resolving against their reason clauses, newest first, then undoes the
    // propagations.
    bool eliminateSegment(const std::vector<std::pair<int, int>>& segment, Clause& clause, int& line) {
        for (auto it = segment.rbegin(); it != segment.rend(); ++it) {
            int lit = it->first;
            int reasonIdx = it->second;
            if (std::find(clause.begin(), clause.end(), -lit) == clause.end()) continue;
            if (!prop.spend(1)) return false;
            int pivot = std::abs(lit);
            const Clause& reason = lines[reasonIdx];
            std::optional<Clause> resolvent =
                lit > 0 ? resolveClauses(reason, clause, pivot) : resolveClauses(clause, reason, pivot);
            if (!resolvent) return false;  // cannot happen for trail-ordered elimination
            int a = lit > 0 ? reasonIdx : line;
            int b = lit > 0 ? line : reasonIdx;
            line = addDerived(*resolvent, a, b, pivot);
            clause = lines[line];
        }
        for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
        return true;
    }

    // Returns the line of a clause all of whose literals are false under the
    // caller's assignment; nullopt when satisfiable or out of budget.
    std::optional<Out> refute() {
        std::vector<std::pair<int, int>> segment;  // (lit, reason line)
        int clauseIdx = 0, unitLit = 0;
        Propagator::Scan s;
        while ((s = prop.scanOnce(clauseIdx, unitLit)) == Propagator::Scan::Propagated) {
            if (!prop.spend(1)) {
                aborted = true;
                break;
            }
            prop.assign(unitLit);
            segment.push_back({unitLit, clauseIdx});
        }
        if (s == Propagator::Scan::OutOfBudget) aborted = true;
        if (aborted) {
            for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
            return std::nullopt;
        }
        if (s == Propagator::Scan::Conflict) {
            Clause clause = lines[clauseIdx];
            int line = clauseIdx;
            if (!eliminateSegment(segment, clause, line)) {
                aborted = true;
                return std::nullopt;
            }
            return Out{clause, line};
        }
        int v = prop.smallestUnassigned();
        if (v == 0) {
            satisfiable = true;
            for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
            return std::nullopt;
        }
        if (!prop.spend(1)) {
            aborted = true;
            for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
            return std::nullopt;
        }

        prop.val[v] = -1;
        std::optional<Out> lo = refute();
        prop.unassign(v);
        if (!lo) {
            for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
            return std::nullopt;
        }
        Out merged = *lo;
        if (std::find(merged.clause.begin(), merged.clause.end(), v) != merged.clause.end()) {
            prop.val[v] = 1;
            std::optional<Out> hi = refute();
            prop.unassign(v);
            if (!hi) {
                for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
                return std::nullopt;
            }
            if (std::find(hi->clause.begin(), hi->clause.end(), -v) != hi->clause.end()) {
                if (!prop.spend(1)) {
                    aborted = true;
                    for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
                    return std::nullopt;
                }
                std::optional<Clause> resolvent = resolveClauses(merged.clause, hi->clause, v);
                if (!resolvent) {
                    aborted = true;
                    for (auto it = segment.rbegin(); it != segment.rend(); ++it) prop.unassign(std::abs(it->first));
                    return std::nullopt;
                }
                int line = addDerived(*resolvent, merged.line, hi->line, v);
                merged = Out{lines[line], line};
            } else {
                merged = *hi;
            }
        }
        if (!eliminateSegment(segment, merged.clause, merged.line)) {
            aborted = true;
            return std::nullopt;
        }
        return merged;
    }
};

}  // namespace

RefutationResult canonicalRefutation(const Cnf& cnf, const WorkCharge& charge) {
    Deriver deriver(cnf, charge);
    std::optional<Deriver::Out> out = deriver.refute();
    if (!out) {
        if (deriver.satisfiable) return {RefutationResult::Status::Sat, {}};
        return {RefutationResult::Status::Aborted, {}};
    }
    // The root clause is falsified by the empty assignment, i.e. empty.
    if (!out->clause.empty()) return {RefutationResult::Status::Aborted, {}};
    return {RefutationResult::Status::Refuted, std::move(deriver.proof)};
}

}  // namespace peff
