// Serial reference against the OpenMP kernels, plus end-to-end expansions.
#include "qmod/kernels.hpp"
#include "qmod/nahm.hpp"
#include "qmod/products.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qmod;

namespace {

struct Operands {
    std::vector<std::int64_t> ia, ib;
    std::vector<BigInt> ca, cb;
};

// Dense-ish operands on [0, L) with large integer coefficients.
Operands make_operands(std::int64_t L, int width) {
    std::mt19937_64 rng(5);
    Operands o;
    for (std::int64_t i = 0; i < L; ++i) {
        if (rng() % 4 == 0) continue;
        o.ia.push_back(i);
        o.ib.push_back(i);
        for (int w = 0; w < width; ++w) {
            o.ca.push_back(BigInt(static_cast<long>(rng() % 1000000)) * BigInt(static_cast<long>(rng() % 1000000)));
            o.cb.push_back(BigInt(static_cast<long>(rng() % 1000000)));
        }
    }
    return o;
}

void run_convolve(benchmark::State& state, kernels::Exec exec) {
    const std::int64_t L = state.range(0);
    const int width = static_cast<int>(state.range(1));
    auto o = make_operands(L, width);
    kernels::SparseOperand a{o.ia.data(), o.ca.data(), o.ia.size(), width};
    kernels::SparseOperand b{o.ib.data(), o.cb.data(), o.ib.size(), width};
    for (auto _ : state) {
        std::vector<BigInt> out(static_cast<std::size_t>(L) * (2 * width - 1));
        kernels::convolve(a, b, L, out, exec);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["threads"] = exec == kernels::Exec::Serial ? 1 : kernels::available_threads();
}

void BM_convolve_serial(benchmark::State& s) { run_convolve(s, kernels::Exec::Serial); }
void BM_convolve_parallel(benchmark::State& s) { run_convolve(s, kernels::Exec::Parallel); }

void BM_nahm_rank3(benchmark::State& state) {
    const auto exec = state.range(0) ? kernels::Exec::Parallel : kernels::Exec::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(andrews_gordon_sum(4, 2, Frac(state.range(1)), {exec, true, 1}));
}

void BM_product_build(benchmark::State& state) {
    auto spec = pochs({1, 4}, 5, 1, -1);
    for (auto _ : state) benchmark::DoNotOptimize(spec.build(Frac(state.range(0))));
}

}  // namespace

BENCHMARK(BM_convolve_serial)->Args({500, 1})->Args({2000, 1})->Args({500, 6});
BENCHMARK(BM_convolve_parallel)->Args({500, 1})->Args({2000, 1})->Args({500, 6});
BENCHMARK(BM_nahm_rank3)->Args({0, 80})->Args({1, 80});
BENCHMARK(BM_product_build)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
