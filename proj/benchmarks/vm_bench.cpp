#include <benchmark/benchmark.h>

#include <random>

#include "peff/formula.hpp"
#include "peff/machine.hpp"

namespace {

using namespace peff;

void BM_RunPrintProgram(benchmark::State& state) {
    Bits payload;
    std::mt19937_64 rng(1);
    for (int i = 0; i < state.range(0); ++i) payload.push(rng() & 1);
    Program p = printProgramFor(payload);
    for (auto _ : state) {
        ExecOutcome out = run(p, Bits{}, payload.size() + 2);
        benchmark::DoNotOptimize(out.steps);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunPrintProgram)->Arg(64)->Arg(1024)->Arg(16384);

void BM_RunGarbagePrograms(benchmark::State& state) {
    // The enumeration workload: mostly instantly-halting bit strings.
    std::vector<Program> programs = enumeratePrograms(12);
    Bits input = Bits::fromAscii("(x1 | ~x1)");
    std::size_t i = 0;
    for (auto _ : state) {
        ExecOutcome out = run(programs[i], input, 256);
        benchmark::DoNotOptimize(out.steps);
        if (++i == programs.size()) i = 0;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunGarbagePrograms);

void BM_ProofOpcode(benchmark::State& state) {
    Program e = assemble("resproof");
    Bits input = Bits::fromAscii(Formula::parse("(x1 & x2 | ~x1 | ~x2)").render());
    for (auto _ : state) {
        ExecOutcome out = run(e, input, 1 << 16);
        benchmark::DoNotOptimize(out.output.size());
    }
}
BENCHMARK(BM_ProofOpcode);

}  // namespace

BENCHMARK_MAIN();
