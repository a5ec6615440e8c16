#include "peff/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peff {

namespace {

constexpr int kMaxLevelCap = 28;

Bits formulaInput(const Formula& tau) { return Bits::fromAscii(tau.render()); }

}  // namespace

DovetailSearch::DovetailSearch(ProofSystemId system, Formula tau, VerifierContext ctx,
                               std::vector<Program> planted)
    : system_(std::move(system)), tau_(std::move(tau)), ctx_(ctx), planted_(std::move(planted)),
      input_(formulaInput(tau_)) {}

Program DovetailSearch::programAt(std::uint64_t idx) const {
    if (idx < planted_.size()) return planted_[idx];
    idx -= planted_.size();
    // Length-lexicographic rank: lengths l hold 2^l programs starting at rank 2^l - 1.
    std::size_t len = 0;
    std::uint64_t first = 0;
    while (idx - first >= (1ULL << len)) {
        first += 1ULL << len;
        ++len;
    }
    std::uint64_t offset = idx - first;
    Bits code;
    for (std::size_t i = 0; i < len; ++i) code.push((offset >> (len - 1 - i)) & 1);
    return Program{std::move(code)};
}

std::optional<SearchOutcome> DovetailSearch::tick() {
    Program e = programAt(index_);
    ExecOutcome out = run(e, input_, round_);
    hostSteps_ += out.steps + 1;
    if (out.status == RunStatus::Halted && !out.output.empty()) {
        hostSteps_ += out.output.size();
        VerifyResult v = verify(system_, out.output, ctx_);
        if (v.accepted() && v.formula->identical(tau_)) {
            SearchOutcome result;
            result.status = SearchOutcome::Status::Found;
            result.proof = out.output;
            result.rounds = round_;
            result.hostSteps = hostSteps_;
            return result;
        }
    }
    ++index_;
    if (index_ >= round_) {
        ++round_;
        index_ = 0;
    }
    return std::nullopt;
}

SearchOutcome runDovetailSearch(const ProofSystemId& P, const Formula& tau, std::uint64_t stepCap,
                            const VerifierContext& ctx, std::vector<Program> planted) {
    DovetailSearch search(P, tau, ctx, std::move(planted));
    while (search.hostSteps() < stepCap) {
        auto done = search.tick();
        if (done) return *done;
    }
    SearchOutcome out;
    out.status = SearchOutcome::Status::BudgetExhausted;
    out.rounds = search.round();
    out.hostSteps = search.hostSteps();
    return out;
}

LevelSearch::LevelSearch(ProofSystemId system, Formula tau, VerifierContext ctx)
    : system_(std::move(system)), tau_(std::move(tau)), ctx_(ctx), input_(formulaInput(tau_)) {}

std::optional<SearchOutcome> LevelSearch::tick(int levelCap) {
    if (levelCap > kMaxLevelCap) throw std::invalid_argument("level cap above enumeration guard");
    while (true) {
        if (level_ > levelCap) {
            SearchOutcome out;
            out.status = SearchOutcome::Status::BudgetExhausted;
            out.level = levelCap + 1;  // every level up to the cap is ruled out
            out.rounds = static_cast<std::uint64_t>(levelCap) + 1;
            out.hostSteps = hostSteps_;
            return out;
        }
        if (!enumeratorReady_) {
            enumerator_ = ProgramEnumerator(static_cast<std::size_t>(len_));
            enumerator_.seekLength(static_cast<std::size_t>(len_));
            enumeratorReady_ = true;
        }
        Program e;
        if (!enumerator_.next(e)) {
            enumeratorReady_ = false;
            if (++len_ > level_) {
                len_ = 0;
                ++level_;
            }
            continue;
        }
        std::uint64_t t = 1ULL << (level_ - len_);
        ExecOutcome out = run(e, input_, t);
        hostSteps_ += out.steps + 1;
        if (out.status == RunStatus::Halted && !out.output.empty()) {
            hostSteps_ += out.output.size();
            VerifyResult v = verify(system_, out.output, ctx_);
            if (v.accepted() && v.formula->identical(tau_)) {
                SearchOutcome result;
                result.status = SearchOutcome::Status::Found;
                result.proof = out.output;
                result.level = level_;
                result.rounds = static_cast<std::uint64_t>(level_) + 1;
                result.hostSteps = hostSteps_;
                return result;
            }
        }
        return std::nullopt;  // one (e, t) pair per tick
    }
}

SearchOutcome runLevelSearch(const ProofSystemId& P, const Formula& tau, int levelCap,
                           const VerifierContext& ctx) {
    LevelSearch search(P, tau, ctx);
    while (true) {
        auto done = search.tick(levelCap);
        if (done) return *done;
    }
}

EfficiencyResult informationEfficiency(const ProofSystemId& P, const Formula& tau, int levelCap, const VerifierContext& ctx) {
    SearchOutcome out = runLevelSearch(P, tau, levelCap, ctx);
    EfficiencyResult r;
    r.level = out.level;
    r.exact = out.found();
    r.proof = out.proof;
    r.hostSteps = out.hostSteps;
    return r;
}

TotalizedResult totalizedSearch(SearchAlgo algo, const ProofSystemId& P, const Formula& tau,
                                const TotalizeCaps& caps, const VerifierContext& ctx) {
    TotalizedResult result;
    int n = tau.varCount();
    std::uint64_t falsifierTotal = n > 62 ? ~0ULL : (1ULL << n);
    std::uint64_t falsifierNext = 0;

    DovetailSearch dovetail(P, tau, ctx);
    LevelSearch levels(P, tau, ctx);

    auto searcherSteps = [&] { return algo == SearchAlgo::Dovetail ? dovetail.hostSteps() : levels.hostSteps(); };

    while (true) {
        // Searcher quantum: one candidate.
        std::optional<SearchOutcome> done;
        if (algo == SearchAlgo::Dovetail) {
            done = dovetail.tick();
            if (!done && dovetail.hostSteps() >= caps.stepCap) {
                SearchOutcome exhausted;
                exhausted.status = SearchOutcome::Status::BudgetExhausted;
                exhausted.hostSteps = dovetail.hostSteps();
                done = exhausted;
            }
        } else {
            done = levels.tick(caps.levelCap);
        }
        if (done) {
            result.searchSteps = done->hostSteps;
            result.falsifierSteps = falsifierNext;
            if (done->found()) {
                result.kind = TotalizedResult::Kind::Proof;
                result.proof = done->proof;
                result.level = done->level;
            } else {
                result.kind = TotalizedResult::Kind::Exhausted;
            }
            return result;
        }
        // Falsifier quantum: catch up to the searcher's spent steps, one
        // assignment per step unit.
        while (falsifierNext < falsifierTotal && falsifierNext < searcherSteps()) {
            Assignment a = Assignment::fromIndex(falsifierNext, n);
            ++falsifierNext;
            if (!evaluate(tau, a)) {
                result.kind = TotalizedResult::Kind::Falsified;
                result.counterexample = a;
                result.searchSteps = searcherSteps();
                result.falsifierSteps = falsifierNext;
                return result;
            }
        }
    }
}

DecisionOutcome deciderFromSearch(SearchAlgo algo, const ProofSystemId& P, const Formula& tau,
                                  const TotalizeCaps& caps, const VerifierContext& ctx) {
    TotalizedResult r = totalizedSearch(algo, P, tau, caps, ctx);
    DecisionOutcome out;
    out.steps = r.searchSteps + r.falsifierSteps;
    if (r.kind == TotalizedResult::Kind::Proof) {
        VerifyResult v = verify(P, r.proof, ctx);
        out.isTautology = v.accepted() && v.formula->identical(tau);
    } else if (r.kind == TotalizedResult::Kind::Exhausted) {
        out.budgetExhausted = true;
    }
    return out;
}

std::optional<Bits> DeciderSystem::search(const Formula& tau) const {
    if (!decider.decide(tau)) return std::nullopt;
    Bits out;
    appendFormulaSection(out, tau);
    out.append(decider.record(tau));
    return out;
}

DeciderSystem systemFromDecider(Decider M) {
    DeciderSystem ds;
    ds.system = ProofSystemId::record(M.tag);
    ds.decider = std::move(M);
    return ds;
}

PowerFit fitStepLaw(const std::vector<FitSample>& samples) {
    if (samples.empty()) return {0.0, 0.0};
    // Least squares for y = log2(steps) - 2*level against x = log2(tauBits),
    // then the coefficient is maxed so the law holds on every sample.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        double x = std::log2(static_cast<double>(s.tauBits));
        double y = std::log2(static_cast<double>(std::max<std::uint64_t>(s.steps, 1))) - 2.0 * s.level;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = samples.size();
    double denom = m * sxx - sx * sx;
    double k = denom > 1e-9 ? (m * sxy - sx * sy) / denom : 0.0;
    k = std::max(0.0, k);
    double coefficient = 0.0;
    for (const auto& s : samples) {
        double denomRow = std::pow(2.0, 2.0 * s.level) * std::pow(static_cast<double>(s.tauBits), k);
        coefficient = std::max(coefficient, static_cast<double>(s.steps) / denomRow);
    }
    return {coefficient, k};
}

}  // namespace peff
