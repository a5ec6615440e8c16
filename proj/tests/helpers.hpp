#pragma once

#include <optional>
#include <random>

#include "peff/cnf.hpp"
#include "peff/formula.hpp"

namespace peff::testing {

using Rng = std::mt19937_64;

inline Formula randomFormula(Rng& rng, int maxVar, int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 4);
    switch (kind(rng)) {
        case 0:
            return Formula::var(std::uniform_int_distribution<int>(1, maxVar)(rng));
        case 1:
            return Formula::constant(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
        case 2:
            return Formula::negation(randomFormula(rng, maxVar, depth - 1));
        default: {
            bool conj = kind(rng) % 2 == 0;
            int width = std::uniform_int_distribution<int>(2, 3)(rng);
            std::vector<Formula> children;
            for (int i = 0; i < width; ++i) children.push_back(randomFormula(rng, maxVar, depth - 1));
            return conj ? Formula::conjunction(std::move(children))
                        : Formula::disjunction(std::move(children));
        }
    }
}

// Plain recursive evaluator, kept separate from the library one on purpose.
inline bool naiveEval(const Formula& f, const Assignment& a) {
    switch (f.kind()) {
        case Formula::Kind::Const: return f.constValue();
        case Formula::Kind::Var: return a.value(f.varIndex());
        case Formula::Kind::Not: return !naiveEval(f.child(), a);
        case Formula::Kind::And: {
            bool acc = true;
            for (const auto& c : f.children()) acc = naiveEval(c, a) && acc;
            return acc;
        }
        case Formula::Kind::Or: {
            bool acc = false;
            for (const auto& c : f.children()) acc = naiveEval(c, a) || acc;
            return acc;
        }
    }
    return false;
}

// Exhaustive satisfiability over all variables, including auxiliaries.
inline std::optional<Assignment> exhaustiveSat(const Cnf& cnf) {
    int n = cnf.varCount();
    for (std::uint64_t idx = 0; idx < (1ULL << n); ++idx) {
        Assignment a = Assignment::fromIndex(idx, n);
        if (cnf.satisfied(a)) return a;
    }
    return std::nullopt;
}

}  // namespace peff::testing
