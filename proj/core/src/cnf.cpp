#include "peff/cnf.hpp"

#include <algorithm>
#include <sstream>

namespace peff {

Assignment Assignment::fromIndex(std::uint64_t index, int n) {
    Assignment a(n);
    for (int v = 1; v <= n; ++v) a.set(v, (index >> (v - 1)) & 1);
    return a;
}

std::uint64_t Assignment::toIndex() const {
    std::uint64_t idx = 0;
    for (int v = size(); v >= 1; --v) idx = (idx << 1) | (value(v) ? 1 : 0);
    return idx;
}

std::optional<Clause> normalizeClause(Clause lits) {
    std::sort(lits.begin(), lits.end(), [](int a, int b) {
        int va = std::abs(a), vb = std::abs(b);
        return va != vb ? va < vb : a < b;
    });
    Clause out;
    for (int l : lits) {
        if (l == 0) throw std::invalid_argument("literal 0 is not allowed");
        if (!out.empty() && out.back() == l) continue;
        if (!out.empty() && out.back() == -l) return std::nullopt;
        out.push_back(l);
    }
    return out;
}

void Cnf::setVarCount(int n) {
    for (const auto& c : clauses_)
        for (int l : c)
            if (std::abs(l) > n) throw std::invalid_argument("varCount below existing literal");
    varCount_ = n;
}

void Cnf::addClause(Clause lits) {
    auto norm = normalizeClause(std::move(lits));
    if (!norm) throw std::invalid_argument("tautological clause rejected");
    for (int l : *norm)
        if (std::abs(l) > varCount_) throw std::invalid_argument("literal out of range");
    clauses_.push_back(std::move(*norm));
}

bool Cnf::addClauseSkipTautology(Clause lits) {
    auto norm = normalizeClause(std::move(lits));
    if (!norm) return false;
    for (int l : *norm)
        if (std::abs(l) > varCount_) throw std::invalid_argument("literal out of range");
    clauses_.push_back(std::move(*norm));
    return true;
}

bool Cnf::satisfied(const Assignment& a) const {
    for (const auto& c : clauses_) {
        bool sat = false;
        for (int l : c) {
            if (l > 0 ? a.value(l) : !a.value(-l)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

namespace {

struct TseitinBuilder {
    int nextAux;
    std::vector<Clause> clauses;

    explicit TseitinBuilder(int firstAux) : nextAux(firstAux) {}

    void emit(Clause c) { clauses.push_back(std::move(c)); }

    // Returns the literal standing for the subtree.
    int encode(const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Var: return f.varIndex();
            case Formula::Kind::Not: return -encode(f.child());
            case Formula::Kind::Const: {
                int v = nextAux++;
                emit({f.constValue() ? v : -v});
                return v;
            }
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                std::vector<int> lits;
                lits.reserve(f.children().size());
                for (const auto& c : f.children()) lits.push_back(encode(c));
                int v = nextAux++;
                if (f.kind() == Formula::Kind::And) {
                    Clause wide{v};
                    for (int l : lits) {
                        emit({-v, l});
                        wide.push_back(-l);
                    }
                    emit(std::move(wide));
                } else {
                    Clause wide{-v};
                    for (int l : lits) {
                        emit({v, -l});
                        wide.push_back(l);
                    }
                    emit(std::move(wide));
                }
                return v;
            }
        }
        return 0;
    }
};

}  // namespace

Cnf negateToCnf(const Formula& f) {
    TseitinBuilder builder(f.varCount() + 1);
    int root = builder.encode(f);
    builder.emit({-root});
    Cnf cnf(builder.nextAux - 1);
    for (auto& c : builder.clauses) cnf.addClauseSkipTautology(std::move(c));
    return cnf;
}

Assignment extendWithAuxiliaries(const Formula& f, const Assignment& original, int totalVars) {
    Assignment full(totalVars);
    for (int v = 1; v <= original.size(); ++v) full.set(v, original.value(v));

    // Auxiliaries are forced: replay the encoding and evaluate each defined node.
    struct Walker {
        Assignment& full;
        int nextAux;
        bool eval(const Formula& g) {
            switch (g.kind()) {
                case Formula::Kind::Var: return full.value(g.varIndex());
                case Formula::Kind::Not: return !eval(g.child());
                case Formula::Kind::Const: {
                    int v = nextAux++;
                    full.set(v, g.constValue());
                    return g.constValue();
                }
                case Formula::Kind::And:
                case Formula::Kind::Or: {
                    bool isAnd = g.kind() == Formula::Kind::And;
                    bool acc = isAnd;
                    for (const auto& c : g.children()) {
                        bool b = eval(c);
                        acc = isAnd ? (acc && b) : (acc || b);
                    }
                    int v = nextAux++;
                    full.set(v, acc);
                    return acc;
                }
            }
            return false;
        }
    } walker{full, f.varCount() + 1};
    walker.eval(f);
    return full;
}

std::string toDimacs(const Cnf& c) {
    std::ostringstream out;
    out << "p cnf " << c.varCount() << ' ' << c.clauses().size() << '\n';
    for (const auto& clause : c.clauses()) {
        for (int l : clause) out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

Cnf fromDimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int vars = -1;
    long long clauseCount = -1;
    Cnf cnf;
    Clause current;
    long long seen = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            ls >> p >> fmt >> vars >> clauseCount;
            if (!ls || fmt != "cnf" || vars < 0 || clauseCount < 0)
                throw std::invalid_argument("malformed DIMACS header");
            cnf.setVarCount(vars);
            continue;
        }
        if (vars < 0) throw std::invalid_argument("clause before DIMACS header");
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                cnf.addClause(current);
                current.clear();
                ++seen;
            } else {
                if (std::llabs(lit) > vars) throw std::invalid_argument("literal out of range in DIMACS");
                current.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!current.empty()) throw std::invalid_argument("clause missing terminating 0");
    if (vars < 0) throw std::invalid_argument("missing DIMACS header");
    if (seen != clauseCount) throw std::invalid_argument("clause count does not match header");
    return cnf;
}

}  // namespace peff
