#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "peff/formula.hpp"

namespace peff {

/// A deterministic indexed formula family. Instance n is computable from
/// (tag, n) alone; seedSource is assembly text for a program that prints the
/// rendering of instance n when "<n>" is substituted, and backs compressibility
/// certificates for the instances.
struct FamilySpec {
    std::string tag;
    std::function<Formula(int)> instance;
    std::string seedSource;
    int maxIndex = 16;
};

class FamilyRegistry {
public:
    /// Registers a family after checking each instance up to checkUpTo (capped
    /// by maxIndex and the brute-force variable cap) is a tautology.
    /// Throws std::invalid_argument when an instance fails the check.
    void add(FamilySpec spec, int checkUpTo = 4);

    const FamilySpec* find(const std::string& tag) const;

private:
    std::map<std::string, FamilySpec> families_;
};

}  // namespace peff
