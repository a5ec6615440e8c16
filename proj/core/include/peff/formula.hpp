#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace peff {

/// Truth assignment for variables 1..size(). Variable 1 is the least
/// significant bit of the index used by fromIndex/toIndex.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(int n) : values_(n, false) {}
    static Assignment fromIndex(std::uint64_t index, int n);

    int size() const { return static_cast<int>(values_.size()); }
    bool value(int var) const { return values_[var - 1]; }
    void set(int var, bool v) { values_[var - 1] = v; }
    std::uint64_t toIndex() const;

    bool operator==(const Assignment& o) const { return values_ == o.values_; }

private:
    std::vector<bool> values_;
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Immutable formula tree over variables x1, x2, ... with negation,
/// n-ary conjunction/disjunction (arity >= 2) and the constants 1/0.
///
/// Text grammar (ASCII):
///   expr    := or ('->' expr)?          implication is sugar for ~a | b
///   or      := and ('|' and)*           chains collect into one n-ary node
///   and     := unary ('&' unary)*
///   unary   := '~' unary | atom
///   atom    := '1' | '0' | 'x' digits | '(' expr ')'
///
/// The canonical rendering parenthesizes every conjunction/disjunction group,
/// separates operators with single spaces and never emits '->'. parse(render(f))
/// reconstructs f node for node, and render is injective on distinct trees.
class Formula {
public:
    enum class Kind { Const, Var, Not, And, Or };

    static Formula constant(bool value);
    static Formula var(int index);  // index >= 1
    static Formula negation(Formula child);
    static Formula conjunction(std::vector<Formula> children);  // size >= 2
    static Formula disjunction(std::vector<Formula> children);  // size >= 2

    static Formula parse(const std::string& text);

    Kind kind() const { return node_->kind; }
    bool constValue() const { return node_->value; }
    int varIndex() const { return node_->var; }
    const std::vector<Formula>& children() const { return node_->children; }
    const Formula& child() const { return node_->children.front(); }

    /// Largest variable index occurring in the tree (0 for closed formulas).
    int varCount() const { return node_->maxVar; }

    /// True when the occurring variable indices are exactly 1..varCount().
    bool usesContiguousVars() const;

    std::string render() const;

    /// Size in bits of the canonical rendering (8 bits per character).
    std::size_t sizeBits() const { return 8 * render().size(); }

    bool identical(const Formula& other) const;

    bool operator==(const Formula& o) const { return identical(o); }

private:
    struct Node {
        Kind kind;
        bool value = false;
        int var = 0;
        int maxVar = 0;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula group(Kind kind, std::vector<Formula> children);
    std::shared_ptr<const Node> node_;
};

bool evaluate(const Formula& f, const Assignment& a);

struct TautologyVerdict {
    bool isTautology;
    std::optional<Assignment> counterexample;  // set when not a tautology
};

/// Exhaustive check over all 2^n assignments. Throws when varCount exceeds cap.
TautologyVerdict isTautologyBruteforce(const Formula& f, int varCap = 24);

struct SubstitutionResult {
    Formula formula;
    std::map<int, int> renaming;  // old index -> new index for surviving variables
};

/// Replaces the given variables by constants and simplifies by constant
/// absorption only (0&x -> 0, 1&x -> x, 1|x -> 1, 0|x -> x, ~const folded,
/// single-child groups collapsed). Remaining variables are renumbered
/// contiguously; the renaming map is returned.
SubstitutionResult substituteConstants(const Formula& f, const std::map<int, bool>& partial);

}  // namespace peff
