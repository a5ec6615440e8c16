#include "peff/machine.hpp"

#include <sstream>
#include <stdexcept>

#include "peff/cnf.hpp"
#include "peff/formula.hpp"
#include "peff/generators.hpp"
#include "peff/proofs.hpp"

namespace peff {

namespace vmop {
constexpr std::uint64_t Halt = 0, Emit = 1, Ones = 2, Zeros = 3, CopyIn = 4, Repeat = 5, Pipe = 6,
                        TtProof = 7, ResProof = 8, ErProof = 9, TraceProof = 10, PhpGen = 11, PhpTaut = 12;
}

namespace {

constexpr int kMaxPipeDepth = 64;
constexpr std::uint64_t kMaxPhpIndex = 64;

struct Budget {
    std::uint64_t limit;
    std::uint64_t used = 0;
    bool charge(std::uint64_t k) {
        if (k > limit - used) {
            used = limit;
            return false;
        }
        used += k;
        return true;
    }
};

// Deterministic construction-work schedule for the pigeonhole opcodes; grows
// with the clause count so oversized operands fail the budget before any
// host-side construction happens.
std::uint64_t phpWorkSchedule(std::uint64_t n) {
    return 4 * ((n + 1) + n * n * (n + 1) / 2);
}

struct Exec {
    const Bits* input;
    std::size_t inPos;
    Budget* budget;
    int depth;
    Bits out;

    bool emitBit(bool b) {
        if (!budget->charge(1)) return false;
        out.push(b);
        return true;
    }

    bool drainInput(Bits& consumed) {
        while (inPos < input->size()) {
            if (!budget->charge(1)) return false;
            consumed.push(input->at(inPos++));
        }
        return true;
    }

    bool emitAll(const Bits& bits) {
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (!emitBit(bits.at(i))) return false;
        return true;
    }

    std::optional<Formula> parseDrained(const Bits& consumed) {
        std::string text;
        if (!consumed.toAscii(text) || text.empty()) return std::nullopt;
        try {
            Formula f = Formula::parse(text);
            return f;
        } catch (const ParseError&) {
            return std::nullopt;
        }
    }

    // True on orderly halt, false when the budget ran out.
    bool execute(const Bits& code) {
        BitReader r(code);
        while (true) {
            std::uint64_t op;
            if (!r.readUint(4, op)) return true;
            switch (op) {
                case vmop::Emit: {
                    std::uint64_t len1;
                    if (!r.readGamma(len1)) return true;
                    std::size_t len = static_cast<std::size_t>(len1 - 1);
                    Bits payload;
                    if (!r.readBits(len, payload)) return true;
                    if (!budget->charge(1)) return false;
                    if (!emitAll(payload)) return false;
                    break;
                }
                case vmop::Ones:
                case vmop::Zeros: {
                    std::uint64_t k1;
                    if (!r.readGamma(k1)) return true;
                    if (!budget->charge(1)) return false;
                    bool bit = op == vmop::Ones;
                    for (std::uint64_t i = 0; i + 1 < k1; ++i)
                        if (!emitBit(bit)) return false;
                    break;
                }
                case vmop::CopyIn: {
                    if (!budget->charge(1)) return false;
                    while (inPos < input->size()) {
                        if (!emitBit(input->at(inPos))) return false;
                        ++inPos;
                    }
                    break;
                }
                case vmop::Repeat: {
                    std::uint64_t k1, len1;
                    if (!r.readGamma(k1) || !r.readGamma(len1)) return true;
                    Bits payload;
                    if (!r.readBits(static_cast<std::size_t>(len1 - 1), payload)) return true;
                    if (!budget->charge(1)) return false;
                    for (std::uint64_t i = 0; i + 1 < k1; ++i)
                        if (!emitAll(payload)) return false;
                    break;
                }
                case vmop::Pipe: {
                    if (depth >= kMaxPipeDepth) return true;
                    std::uint64_t len1;
                    if (!r.readGamma(len1)) return true;
                    Bits stage1;
                    if (!r.readBits(static_cast<std::size_t>(len1 - 1), stage1)) return true;
                    Bits stage2;
                    r.readBits(r.remaining(), stage2);
                    Exec first{input, inPos, budget, depth + 1, {}};
                    bool ok = first.execute(stage1);
                    inPos = input->size();
                    if (!ok) return false;
                    Exec second{&first.out, 0, budget, depth + 1, {}};
                    ok = second.execute(stage2);
                    out.append(second.out);
                    return ok;  // the pipe consumes the rest of the program
                }
                case vmop::TtProof:
                case vmop::ResProof:
                case vmop::ErProof:
                case vmop::TraceProof: {
                    if (!budget->charge(1)) return false;
                    Bits consumed;
                    if (!drainInput(consumed)) return false;
                    auto f = parseDrained(consumed);
                    if (!f) break;
                    if (op == vmop::TtProof) {
                        int n = f->varCount();
                        if (n > 62) break;
                        std::string text = f->render();
                        if (!budget->charge(text.size())) return false;
                        Bits section;
                        appendFormulaSection(section, *f);
                        if (!emitAll(section)) return false;
                        std::uint64_t pad = 1ULL << n;
                        for (std::uint64_t i = 0; i < pad; ++i)
                            if (!emitBit(true)) return false;
                        break;
                    }
                    Cnf target = negateToCnf(*f);
                    std::uint64_t litWork = 0;
                    for (const auto& c : target.clauses()) litWork += 1 + c.size();
                    if (!budget->charge(f->render().size() + litWork)) return false;
                    auto charge = [this](std::uint64_t k) { return budget->charge(k); };
                    if (op == vmop::TraceProof) {
                        DpllResult res = dpllSolve(target, charge);
                        if (res.status == DpllResult::Status::Aborted) return false;
                        if (res.status == DpllResult::Status::Sat) break;
                        if (!emitAll(psProofBits(*f, res.trace))) return false;
                    } else {
                        RefutationResult ref = canonicalRefutation(target, charge);
                        if (ref.status == RefutationResult::Status::Aborted) return false;
                        if (ref.status == RefutationResult::Status::Sat) break;
                        Bits bits = op == vmop::ResProof ? resProofBits(*f, ref.proof)
                                                         : erProofBits(*f, ref.proof);
                        if (!emitAll(bits)) return false;
                    }
                    break;
                }
                case vmop::PhpGen:
                case vmop::PhpTaut: {
                    std::uint64_t n;
                    if (!r.readGamma(n)) return true;
                    if (n < 1 || n > kMaxPhpIndex) return true;
                    if (!budget->charge(1)) return false;
                    if (!budget->charge(phpWorkSchedule(n))) return false;
                    if (op == vmop::PhpTaut) {
                        Formula f = phpTautology(static_cast<int>(n));
                        Bits bits = Bits::fromAscii(f.render());
                        if (!emitAll(bits)) return false;
                    } else {
                        auto charge = [this](std::uint64_t k) { return budget->charge(k); };
                        auto bits = erProofPhpBits(static_cast<int>(n), charge);
                        if (!bits) return false;
                        if (!emitAll(*bits)) return false;
                    }
                    break;
                }
                case vmop::Halt:
                default:
                    return true;
            }
        }
    }
};

}  // namespace

ExecOutcome run(const Program& e, const Bits& input, std::uint64_t t) {
    if (t < 1) throw std::invalid_argument("time budget must be at least 1");
    Budget budget{t};
    Exec exec{&input, 0, &budget, 0, {}};
    bool halted = exec.execute(e.code);
    return {halted ? RunStatus::Halted : RunStatus::TimedOut, std::move(exec.out), halted ? budget.used : t};
}

Program printProgramFor(const Bits& w) {
    Bits code;
    if (w.empty()) {
        appendUint(code, vmop::Zeros, 4);
        appendGamma(code, 1);
        appendUint(code, vmop::Emit, 4);
        appendGamma(code, 1);
    } else {
        appendUint(code, vmop::Emit, 4);
        appendGamma(code, w.size() + 1);
        code.append(w);
    }
    return {code};
}

Program composePrograms(const Program& e1, const Program& e2) {
    Bits code;
    appendUint(code, vmop::Pipe, 4);
    appendGamma(code, e1.length() + 1);
    code.append(e1.code);
    code.append(e2.code);
    return {code};
}

bool ProgramEnumerator::next(Program& out) {
    while (true) {
        if (len_ > maxLen_) return false;
        if (len_ == 0) {
            if (first_) {
                first_ = false;
                out = Program{Bits{}};
                return true;
            }
            len_ = 1;
            index_ = 0;
            continue;
        }
        if (len_ >= 63 || index_ >= (1ULL << len_)) {
            ++len_;
            index_ = 0;
            continue;
        }
        Bits b;
        for (std::size_t i = 0; i < len_; ++i) b.push((index_ >> (len_ - 1 - i)) & 1);
        ++index_;
        out = Program{std::move(b)};
        return true;
    }
}

void ProgramEnumerator::seekLength(std::size_t len) {
    len_ = len;
    index_ = 0;
    first_ = len == 0;
}

std::vector<Program> enumeratePrograms(std::size_t maxLen) {
    std::vector<Program> all;
    ProgramEnumerator en(maxLen);
    Program p;
    while (en.next(p)) all.push_back(p);
    return all;
}

std::string MachineSpec::toJson() const {
    std::ostringstream out;
    out << "{\"versionTag\":\"" << versionTag << "\",\"cPrint\":" << cPrint << ",\"cIgnore\":" << cIgnore
        << ",\"cComp\":" << cComp << ",\"cPair\":" << cPair << "}";
    return out.str();
}

const MachineSpec& machineSpec() {
    static const MachineSpec spec = [] {
        MachineSpec s;
        s.versionTag = "peff-vm1/enc1/costs1";
        s.cPrint = printProgramFor(Bits{}).length();
        s.cIgnore = 0;
        std::uint64_t pair = 0;
        for (std::uint64_t len = 0; len <= 64; ++len) {
            std::uint64_t header = 4 + gammaLength(len + 1);
            std::uint64_t allowance = 2 * static_cast<std::uint64_t>(ceilLog2(len + 1));
            if (header > allowance) pair = std::max(pair, header - allowance);
        }
        s.cPair = pair;
        s.cComp = s.cPair + 1;  // one extra bit absorbs the carry in ceil(log2(t1+t2))
        return s;
    }();
    return spec;
}

const std::string& machineVersion() { return machineSpec().versionTag; }

}  // namespace peff
