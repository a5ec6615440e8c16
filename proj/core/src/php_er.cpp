#include <algorithm>
#include <map>
#include <stdexcept>

#include "peff/generators.hpp"

namespace peff {

namespace {

int phpVar(int n, int pigeon, int hole) { return (pigeon - 1) * n + hole; }

}  // namespace

Cnf genPhp(int n) {
    if (n < 1) throw std::invalid_argument("pigeonhole index must be at least 1");
    Cnf cnf((n + 1) * n);
    for (int i = 1; i <= n + 1; ++i) {
        Clause pigeon;
        for (int j = 1; j <= n; ++j) pigeon.push_back(phpVar(n, i, j));
        cnf.addClause(std::move(pigeon));
    }
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n + 1; ++i)
            for (int i2 = i + 1; i2 <= n + 1; ++i2)
                cnf.addClause({-phpVar(n, i, j), -phpVar(n, i2, j)});
    return cnf;
}

Formula phpTautology(int n) {
    Cnf cnf = genPhp(n);
    std::vector<Formula> groups;
    groups.reserve(cnf.clauses().size());
    for (const auto& clause : cnf.clauses()) {
        if (clause.size() == 1) {
            int lit = clause[0];
            groups.push_back(lit > 0 ? Formula::negation(Formula::var(lit)) : Formula::var(-lit));
        } else {
            std::vector<Formula> parts;
            parts.reserve(clause.size());
            for (int lit : clause)
                parts.push_back(lit > 0 ? Formula::negation(Formula::var(lit)) : Formula::var(-lit));
            groups.push_back(Formula::conjunction(std::move(parts)));
        }
    }
    return Formula::disjunction(std::move(groups));
}

namespace {

struct ErPhpBuilder {
    int n;
    const WorkCharge& charge;
    ResolutionProof proof;
    std::vector<Clause> lines;
    bool outOfBudget = false;

    // Extension bookkeeping: per (level k, pigeon i, hole j) the pair/selector
    // variables, plus the stored definition literal order.
    struct ExtRecord {
        int var;
        int lit1;
        int lit2;
        int index;  // position in proof.extensions
    };
    std::map<std::tuple<int, int, int, char>, ExtRecord> exts;

    ErPhpBuilder(const Cnf& target, int n_, const WorkCharge& ch) : n(n_), charge(ch) {
        proof.target = target;
    }

    bool spend(std::uint64_t k) {
        if (charge && !charge(k)) {
            outOfBudget = true;
            return false;
        }
        return true;
    }

    ExtRecord addExtension(int key1, int key2, int key3, char which, int l1, int l2, int& nextVar) {
        if (std::abs(l1) > std::abs(l2)) std::swap(l1, l2);
        ExtRecord rec{nextVar, l1, l2, static_cast<int>(proof.extensions.size())};
        proof.extensions.push_back({nextVar, l1, l2});
        ++nextVar;
        exts[{key1, key2, key3, which}] = rec;
        return rec;
    }

    // Line index of the definition clause (-v | lit) inside the extension block.
    int defLine(const ExtRecord& rec, int lit) const {
        int base = static_cast<int>(proof.target.clauses().size()) + 3 * rec.index;
        if (rec.lit1 == lit) return base;
        if (rec.lit2 == lit) return base + 1;
        throw std::logic_error("definition literal not found");
    }
    int productionLine(const ExtRecord& rec) const {
        return static_cast<int>(proof.target.clauses().size()) + 3 * rec.index + 2;
    }

    void materializeLines() { lines = proof.allLines(); }

    int addStep(int fromA, int fromB, int pivot) {
        auto r = resolveClauses(lines[fromA], lines[fromB], pivot);
        if (!r) throw std::logic_error("pigeonhole derivation produced an invalid step");
        proof.derived.push_back(*r);
        proof.steps.push_back({fromA, fromB, pivot});
        lines.push_back(std::move(*r));
        return static_cast<int>(lines.size()) - 1;
    }

    // Resolve on a literal: la contains lit, lb contains its negation.
    // Returns a harmless dummy once the budget is exhausted; callers check
    // outOfBudget between derivation blocks.
    int addStepLit(int la, int lb, int lit) {
        if (outOfBudget || !spend(2)) return 0;
        return lit > 0 ? addStep(la, lb, lit) : addStep(lb, la, -lit);
    }
};

}  // namespace

std::optional<ResolutionProof> erProofPhp(int n, const WorkCharge& charge) {
    if (n < 1) throw std::invalid_argument("pigeonhole index must be at least 1");
    Formula tau = phpTautology(n);
    Cnf target = negateToCnf(tau);
    ErPhpBuilder b(target, n, charge);

    // Mirror of the definitional encoding: group auxiliaries in root-child
    // order, then the root variable.
    int firstAux = (n + 1) * n;
    int aux = firstAux;
    std::vector<int> childLits;
    for (const auto& child : tau.children()) {
        if (child.kind() == Formula::Kind::Not)
            childLits.push_back(-child.child().varIndex());
        else
            childLits.push_back(++aux);
    }
    int rootVar = ++aux;

    // Literal tables per level: L[k](i,j), 1-based, pigeons 1..k+1, holes 1..k.
    std::map<int, std::vector<std::vector<int>>> L;
    L[n].assign(n + 2, std::vector<int>(n + 1, 0));
    for (int i = 1; i <= n + 1; ++i)
        for (int j = 1; j <= n; ++j) L[n][i][j] = phpVar(n, i, j);

    int nextVar = target.varCount() + 1;
    for (int k = n; k >= 2; --k) {
        L[k - 1].assign(k + 1, std::vector<int>(k, 0));
        for (int i = 1; i <= k; ++i) {
            for (int j = 1; j <= k - 1; ++j) {
                if (!b.spend(2)) return std::nullopt;
                auto a = b.addExtension(k, i, j, 'a', L[k][i][k], L[k][k + 1][j], nextVar);
                auto y = b.addExtension(k, i, j, 'y', -L[k][i][j], -a.var, nextVar);
                L[k - 1][i][j] = -y.var;
            }
        }
    }
    b.materializeLines();

    // Recover the plain pigeonhole clauses from the definitional ones.
    auto findInput = [&](const Clause& c) {
        const auto& inputs = target.clauses();
        for (std::size_t i = 0; i < inputs.size(); ++i)
            if (inputs[i] == c) return static_cast<int>(i);
        throw std::logic_error("expected definitional clause not found");
    };
    auto findProduction = [&](int g) {
        const auto& inputs = target.clauses();
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const Clause& c = inputs[i];
            if (std::find(c.begin(), c.end(), g) == c.end()) continue;
            if (std::find(c.begin(), c.end(), -rootVar) != c.end()) continue;
            return static_cast<int>(i);
        }
        throw std::logic_error("group production clause not found");
    };

    int unitLine = findInput({-rootVar});
    std::map<std::pair<int, int>, int> prow;                  // (level, pigeon) -> line
    std::map<std::tuple<int, int, int, int>, int> hole;       // (level, i, i2, j) -> line
    Cnf php = genPhp(n);
    std::size_t clauseCursor = 0;
    for (int idx = 0; idx < static_cast<int>(childLits.size()); ++idx) {
        if (!b.spend(2)) return std::nullopt;
        int c = childLits[idx];
        int rootClause = findInput(*normalizeClause({rootVar, -c}));
        int negUnit = b.addStep(rootClause, unitLine, rootVar);  // (-c)
        int textbookLine;
        if (c > firstAux) {
            int production = findProduction(c);
            textbookLine = b.addStep(production, negUnit, c);
        } else {
            textbookLine = negUnit;  // unit pigeon clause, already in plain form
        }
        const Clause& plain = php.clauses()[clauseCursor++];
        if (b.lines[textbookLine] != plain) throw std::logic_error("recovered clause mismatch");
        if (idx <= n)
            prow[{n, idx + 1}] = textbookLine;
        else {
            // Hole clauses follow in (j, i, i2) order.
            int h = idx - (n + 1);
            int perHole = (n + 1) * n / 2;
            int j = h / perHole + 1;
            int rem = h % perHole;
            int i = 1;
            while (rem >= n + 1 - i) {
                rem -= n + 1 - i;
                ++i;
            }
            int i2 = i + rem + 1;
            hole[{n, i, i2, j}] = textbookLine;
        }
    }

    // Hole-count reduction until two pigeons and one hole remain.
    for (int k = n; k >= 2; --k) {
        auto yRec = [&](int i, int j) { return b.exts.at({k, i, j, 'y'}); };
        auto aRec = [&](int i, int j) { return b.exts.at({k, i, j, 'a'}); };

        for (int i = 1; i <= k; ++i) {
            for (int i2 = i + 1; i2 <= k; ++i2) {
                for (int j = 1; j <= k - 1; ++j) {
                    if (b.outOfBudget) return std::nullopt;
                    auto yi = yRec(i, j), yi2 = yRec(i2, j), ai = aRec(i, j), ai2 = aRec(i2, j);
                    int X = L[k][i][j], X2 = L[k][i2][j];
                    int Xik = L[k][i][k], Xi2k = L[k][i2][k], XNj = L[k][k + 1][j];
                    int c1 = b.productionLine(yi), c2 = b.productionLine(yi2);
                    int h1 = hole.at({k, i, i2, j});
                    int h2 = hole.at({k, i, k + 1, j});
                    int h3 = hole.at({k, i2, k + 1, j});
                    int h4 = hole.at({k, i, i2, k});
                    int t1a = b.addStepLit(c2, h1, X2);                              // (y2 a2 ~X)
                    int t1b = b.addStepLit(b.defLine(ai2, XNj), h2, XNj);            // (~a2 ~X)
                    int t1 = b.addStepLit(t1a, t1b, ai2.var);                        // (y2 ~X)
                    int t2a = b.addStepLit(c2, h3, X2);                              // (y2 a2 ~XNj)
                    int t2b = b.addStepLit(b.defLine(ai2, Xi2k), h4, Xi2k);          // (~a2 ~Xik)
                    int t2c = b.addStepLit(t2a, t2b, ai2.var);                       // (y2 ~XNj ~Xik)
                    int t2d = b.addStepLit(b.defLine(ai, XNj), t2c, XNj);            // (~a y2 ~Xik)
                    int t2 = b.addStepLit(b.defLine(ai, Xik), t2d, Xik);             // (~a y2)
                    int f1 = b.addStepLit(c1, t1, X);                                // (y a y2)
                    int f2 = b.addStepLit(f1, t2, ai.var);                           // (y y2)
                    if (b.outOfBudget) return std::nullopt;
                    hole[{k - 1, i, i2, j}] = f2;
                }
            }
        }
        for (int i = 1; i <= k; ++i) {
            if (b.outOfBudget) return std::nullopt;
            int r = prow.at({k, i});
            for (int j = 1; j <= k - 1; ++j) {
                r = b.addStepLit(r, b.defLine(yRec(i, j), -L[k][i][j]), L[k][i][j]);
                if (b.outOfBudget) return std::nullopt;
            }
            int s = prow.at({k, k + 1});
            for (int j = 1; j <= k - 1; ++j) {
                int v = b.addStepLit(b.productionLine(aRec(i, j)), b.defLine(yRec(i, j), -aRec(i, j).var),
                                     aRec(i, j).var);  // (~y ~Xik ~XNj)
                s = b.addStepLit(s, v, L[k][k + 1][j]);
                if (b.outOfBudget) return std::nullopt;
            }
            int s2 = b.addStepLit(s, hole.at({k, i, k + 1, k}), L[k][k + 1][k]);  // (~Xik ~y..)
            int pnew = b.addStepLit(r, s2, L[k][i][k]);
            if (b.outOfBudget) return std::nullopt;
            prow[{k - 1, i}] = pnew;
        }
    }

    // Base case: two pigeons, one hole.
    if (b.outOfBudget) return std::nullopt;
    if (!b.spend(4)) return std::nullopt;
    int p1 = prow.at({1, 1});
    int p2 = prow.at({1, 2});
    int h = hole.at({1, 1, 2, 1});
    int u = b.addStepLit(p1, h, L[1][1][1]);
    b.addStepLit(p2, u, L[1][2][1]);
    if (b.outOfBudget) return std::nullopt;

    RejectReason reason;
    if (!checkResolutionProof(b.proof, &reason)) throw std::logic_error("pigeonhole refutation failed validation");
    return b.proof;
}

std::optional<Bits> erProofPhpBits(int n, const WorkCharge& charge) {
    auto proof = erProofPhp(n, charge);
    if (!proof) return std::nullopt;
    return erProofBits(phpTautology(n), *proof);
}

}  // namespace peff
