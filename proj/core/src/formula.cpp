#include "peff/formula.hpp"

#include <algorithm>
#include <cctype>

#include "peff/cnf.hpp"

namespace peff {

Formula Formula::constant(bool value) {
    Node n;
    n.kind = Kind::Const;
    n.value = value;
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::var(int index) {
    if (index < 1) throw std::invalid_argument("variable index must be positive");
    Node n;
    n.kind = Kind::Var;
    n.var = index;
    n.maxVar = index;
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negation(Formula child) {
    Node n;
    n.kind = Kind::Not;
    n.maxVar = child.varCount();
    n.children.push_back(std::move(child));
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::group(Kind kind, std::vector<Formula> children) {
    if (children.size() < 2) throw std::invalid_argument("conjunction/disjunction needs at least 2 children");
    int maxVar = 0;
    for (const auto& c : children) maxVar = std::max(maxVar, c.varCount());
    Node n;
    n.kind = kind;
    n.maxVar = maxVar;
    n.children = std::move(children);
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conjunction(std::vector<Formula> children) { return group(Kind::And, std::move(children)); }
Formula Formula::disjunction(std::vector<Formula> children) { return group(Kind::Or, std::move(children)); }

bool Formula::identical(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (node_->kind != other.node_->kind) return false;
    switch (node_->kind) {
        case Kind::Const: return node_->value == other.node_->value;
        case Kind::Var: return node_->var == other.node_->var;
        default: break;
    }
    if (node_->children.size() != other.node_->children.size()) return false;
    for (std::size_t i = 0; i < node_->children.size(); ++i)
        if (!node_->children[i].identical(other.node_->children[i])) return false;
    return true;
}

bool Formula::usesContiguousVars() const {
    std::vector<bool> seen(static_cast<std::size_t>(varCount()) + 1, false);
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (n->kind == Kind::Var) seen[n->var] = true;
        for (const auto& c : n->children) stack.push_back(c.node_.get());
    }
    for (int v = 1; v <= varCount(); ++v)
        if (!seen[v]) return false;
    return true;
}

namespace {

void renderInto(const Formula& f, std::string& out) {
    switch (f.kind()) {
        case Formula::Kind::Const:
            out.push_back(f.constValue() ? '1' : '0');
            return;
        case Formula::Kind::Var:
            out.push_back('x');
            out += std::to_string(f.varIndex());
            return;
        case Formula::Kind::Not:
            out.push_back('~');
            renderInto(f.child(), out);
            return;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            const char* sep = f.kind() == Formula::Kind::And ? " & " : " | ";
            out.push_back('(');
            bool first = true;
            for (const auto& c : f.children()) {
                if (!first) out += sep;
                first = false;
                renderInto(c, out);
            }
            out.push_back(')');
            return;
        }
    }
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Formula parseAll() {
        Formula f = parseExpr();
        skipWs();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return f;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skipWs() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skipWs();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool eatArrow() {
        skipWs();
        if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
            pos_ += 2;
            return true;
        }
        return false;
    }

    Formula parseExpr() {
        Formula left = parseOr();
        if (eatArrow()) {
            Formula right = parseExpr();  // right associative
            return Formula::disjunction({Formula::negation(std::move(left)), std::move(right)});
        }
        return left;
    }

    Formula parseOr() {
        std::vector<Formula> parts;
        parts.push_back(parseAnd());
        while (true) {
            skipWs();
            // '|' but not part of '->'; '|' is a single char so just check it.
            if (pos_ < text_.size() && text_[pos_] == '|') {
                ++pos_;
                parts.push_back(parseAnd());
            } else {
                break;
            }
        }
        if (parts.size() == 1) return std::move(parts.front());
        return Formula::disjunction(std::move(parts));
    }

    Formula parseAnd() {
        std::vector<Formula> parts;
        parts.push_back(parseUnary());
        while (eat('&')) parts.push_back(parseUnary());
        if (parts.size() == 1) return std::move(parts.front());
        return Formula::conjunction(std::move(parts));
    }

    Formula parseUnary() {
        if (eat('~')) return Formula::negation(parseUnary());
        return parseAtom();
    }

    Formula parseAtom() {
        skipWs();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Formula f = parseExpr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return f;
        }
        if (c == '1') {
            ++pos_;
            return Formula::constant(true);
        }
        if (c == '0') {
            ++pos_;
            return Formula::constant(false);
        }
        if (c == 'x') {
            std::size_t start = pos_;
            ++pos_;
            std::size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == digits) throw ParseError("expected variable index after 'x'", pos_);
            long long idx = 0;
            for (std::size_t i = digits; i < pos_; ++i) {
                idx = idx * 10 + (text_[i] - '0');
                if (idx > 1'000'000) throw ParseError("variable index too large", start);
            }
            if (idx < 1) throw ParseError("variable index must be positive", start);
            return Formula::var(static_cast<int>(idx));
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
};

}  // namespace

std::string Formula::render() const {
    std::string out;
    renderInto(*this, out);
    return out;
}

Formula Formula::parse(const std::string& text) { return Parser(text).parseAll(); }

bool evaluate(const Formula& f, const Assignment& a) {
    if (f.varCount() > a.size()) throw std::invalid_argument("assignment too short for formula");
    switch (f.kind()) {
        case Formula::Kind::Const: return f.constValue();
        case Formula::Kind::Var: return a.value(f.varIndex());
        case Formula::Kind::Not: return !evaluate(f.child(), a);
        case Formula::Kind::And:
            for (const auto& c : f.children())
                if (!evaluate(c, a)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : f.children())
                if (evaluate(c, a)) return true;
            return false;
    }
    return false;
}

TautologyVerdict isTautologyBruteforce(const Formula& f, int varCap) {
    int n = f.varCount();
    if (n > varCap) throw std::invalid_argument("variable count exceeds brute-force cap");
    for (std::uint64_t idx = 0; idx < (1ULL << n); ++idx) {
        Assignment a = Assignment::fromIndex(idx, n);
        if (!evaluate(f, a)) return {false, a};
    }
    return {true, std::nullopt};
}

namespace {

// Substitution with constant absorption; nullopt marks "constant true/false".
struct Folded {
    std::optional<Formula> formula;  // absent when the subtree collapsed to a constant
    bool constant = false;
};

Folded substImpl(const Formula& f, const std::map<int, bool>& partial) {
    switch (f.kind()) {
        case Formula::Kind::Const: return {std::nullopt, f.constValue()};
        case Formula::Kind::Var: {
            auto it = partial.find(f.varIndex());
            if (it == partial.end()) return {f, false};
            return {std::nullopt, it->second};
        }
        case Formula::Kind::Not: {
            Folded c = substImpl(f.child(), partial);
            if (!c.formula) return {std::nullopt, !c.constant};
            return {Formula::negation(std::move(*c.formula)), false};
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            bool isAnd = f.kind() == Formula::Kind::And;
            std::vector<Formula> kept;
            for (const auto& child : f.children()) {
                Folded c = substImpl(child, partial);
                if (!c.formula) {
                    if (c.constant != isAnd) return {std::nullopt, !isAnd};  // absorbing constant
                    continue;                                                // neutral constant dropped
                }
                kept.push_back(std::move(*c.formula));
            }
            if (kept.empty()) return {std::nullopt, isAnd};
            if (kept.size() == 1) return {std::move(kept.front()), false};
            return {isAnd ? Formula::conjunction(std::move(kept)) : Formula::disjunction(std::move(kept)), false};
        }
    }
    return {std::nullopt, false};
}

Formula renameVars(const Formula& f, const std::map<int, int>& renaming) {
    switch (f.kind()) {
        case Formula::Kind::Const: return f;
        case Formula::Kind::Var: return Formula::var(renaming.at(f.varIndex()));
        case Formula::Kind::Not: return Formula::negation(renameVars(f.child(), renaming));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> children;
            children.reserve(f.children().size());
            for (const auto& c : f.children()) children.push_back(renameVars(c, renaming));
            return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(children))
                                                  : Formula::disjunction(std::move(children));
        }
    }
    return f;
}

void collectVars(const Formula& f, std::vector<int>& vars) {
    switch (f.kind()) {
        case Formula::Kind::Var: vars.push_back(f.varIndex()); return;
        case Formula::Kind::Not: collectVars(f.child(), vars); return;
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& c : f.children()) collectVars(c, vars);
            return;
        default: return;
    }
}

}  // namespace

SubstitutionResult substituteConstants(const Formula& f, const std::map<int, bool>& partial) {
    for (const auto& [v, _] : partial)
        if (v < 1 || v > f.varCount()) throw std::invalid_argument("substituted variable not in formula range");
    if (partial.empty()) {
        std::map<int, int> identity;
        for (int v = 1; v <= f.varCount(); ++v) identity[v] = v;
        return {f, std::move(identity)};
    }
    Folded folded = substImpl(f, partial);
    if (!folded.formula) return {Formula::constant(folded.constant), {}};

    std::vector<int> vars;
    collectVars(*folded.formula, vars);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::map<int, int> renaming;
    int next = 1;
    for (int v : vars) renaming[v] = next++;
    return {renameVars(*folded.formula, renaming), std::move(renaming)};
}

}  // namespace peff
