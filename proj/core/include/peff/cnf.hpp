#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peff/formula.hpp"

namespace peff {

using Clause = std::vector<int>;  // literals, nonzero; sign is polarity; kept sorted by |var|, unique

/// Sorts literals by variable and merges repeats. Returns nullopt for
/// tautological clauses (a variable in both polarities).
std::optional<Clause> normalizeClause(Clause lits);

class Cnf {
public:
    Cnf() = default;
    explicit Cnf(int varCount) : varCount_(varCount) {}

    int varCount() const { return varCount_; }
    void setVarCount(int n);
    const std::vector<Clause>& clauses() const { return clauses_; }

    /// Throws on tautological clauses and out-of-range literals.
    void addClause(Clause lits);

    /// Adds the clause unless it is tautological. Returns whether it was added.
    bool addClauseSkipTautology(Clause lits);

    bool satisfied(const Assignment& a) const;

    bool operator==(const Cnf& o) const { return varCount_ == o.varCount_ && clauses_ == o.clauses_; }

private:
    int varCount_ = 0;
    std::vector<Clause> clauses_;
};

/// Equisatisfiable clause form of the negation of f, by definitional encoding.
/// Auxiliary variables are assigned in depth-first postorder of the tree,
/// starting at varCount(f)+1; constant leaves get an auxiliary forced by a
/// unit clause; negations are literal flips and introduce no variable.
/// Tautological definition clauses are dropped. f is a tautology iff the
/// result is unsatisfiable.
Cnf negateToCnf(const Formula& f);

/// Extends an assignment of f's original variables with the forced values of
/// the definitional auxiliaries introduced by negateToCnf.
Assignment extendWithAuxiliaries(const Formula& f, const Assignment& original, int totalVars);

std::string toDimacs(const Cnf& c);
Cnf fromDimacs(const std::string& text);  // throws std::invalid_argument on malformed input

}  // namespace peff
