#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "peff/bits.hpp"

namespace peff {

/// A program for the reference machine is an arbitrary bit string. Decoding is
/// total: truncated or reserved opcodes halt the machine.
///
/// Instruction layout (version vm1): a 4-bit opcode followed by operands.
/// Counts and lengths are Elias-gamma coded as value+1 so zero is encodable;
/// gamma(n) is floor(log2 n) zeros followed by the binary digits of n.
///
///   0000  halt
///   0001  emit    g(len+1) payload      append payload to the output
///   0010  ones    g(k+1)                append k one bits
///   0011  zeros   g(k+1)                append k zero bits
///   0100  copyin                        append remaining input to the output
///   0101  repeat  g(k+1) g(len+1) pay   append payload k times
///   0110  pipe    g(len1+1) e1 e2       run e1 on the input, then e2 on e1's output
///   0111  ttproof                       input = formula text; emit its truth-table proof
///   1000  resproof                      input = formula text; emit the stock resolution refutation proof
///   1001  erproof                       input = formula text; emit the same refutation in ER framing
///   1010  traceproof                    input = formula text; emit the solver-trace proof
///   1011  phpgen  g(n)                  emit the ER proof bits for the pigeonhole instance n
///   1100  phptaut g(n)                  emit the formula text bits of the pigeonhole tautology n
///   1101..1111  halt (reserved)
///
/// Step charging: every instruction dispatch costs one step except halt and
/// pipe (free dispatch); each emitted output bit costs one step; copyin and
/// the four *proof opcodes additionally charge one step per input bit
/// consumed; the formula/solver opcodes charge their internal work (parse,
/// clause construction, solver events) step by step. One output bit therefore
/// always costs at least one step.
struct Program {
    Bits code;

    std::size_t length() const { return code.size(); }
    bool operator==(const Program& o) const { return code == o.code; }
};

enum class RunStatus { Halted, TimedOut };

struct ExecOutcome {
    RunStatus status;
    Bits output;          // partial output when timed out
    std::uint64_t steps;  // exact when halted, == budget when timed out
};

/// Measured machine constants, all in bits. Reproduced by measureMachineSpec.
struct MachineSpec {
    std::string versionTag;
    std::uint64_t cPrint;   // |printProgramFor(epsilon)|
    std::uint64_t cIgnore;  // max observed excess of Kt(w|u) over Kt(w) (0 by construction)
    std::uint64_t cComp;    // additive slack of certificate composition levels
    std::uint64_t cPair;    // additive slack of the self-delimiting program pairing

    std::string toJson() const;
};

const MachineSpec& machineSpec();
const std::string& machineVersion();

/// Runs program e on input u for at most t steps (t >= 1). Total and
/// deterministic; never executes more than t charged steps.
ExecOutcome run(const Program& e, const Bits& input, std::uint64_t t);

/// A program that outputs exactly w on every input, in |w|+O(1) steps, with
/// |e| <= |w| + 2*ceil(log2(|w|+1)) + cPrint.
Program printProgramFor(const Bits& w);

/// Self-delimiting pairing: the result runs e1 on the input, feeds the output
/// to e2 and returns e2's output. |result| <= |e1| + |e2| +
/// 2*ceil(log2(|e1|+1)) + cPair; steps <= steps(e1) + steps(e2).
Program composePrograms(const Program& e1, const Program& e2);

/// All bit strings in length-then-lexicographic order, epsilon first.
class ProgramEnumerator {
public:
    explicit ProgramEnumerator(std::size_t maxLen) : maxLen_(maxLen) {}

    /// Returns false when the stream is exhausted.
    bool next(Program& out);

    /// Restarts the stream at the first program of the given length.
    void seekLength(std::size_t len);

private:
    std::size_t maxLen_;
    std::size_t len_ = 0;
    std::uint64_t index_ = 0;
    bool first_ = true;
};

std::vector<Program> enumeratePrograms(std::size_t maxLen);

/// Assembles the documented mnemonics into a Program. One instruction per
/// line or ';'-separated; '#' starts a comment; bit payloads are 0/1 strings
/// with '-' for the empty payload; pipe takes two brace-delimited blocks.
/// Throws std::invalid_argument on unknown mnemonics or bad operands.
Program assemble(const std::string& source);

}  // namespace peff
