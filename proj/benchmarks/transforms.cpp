#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "haarfht/bench.hpp"
#include "haarfht/chain.hpp"
#include "haarfht/fht.hpp"
#include "haarfht/haar_basis.hpp"
#include "haarfht/synthetic.hpp"

using namespace haarfht;

namespace {

struct Fixture {
    CoarseChain chain;
    HaarBasis basis;
    CumulativeWeights weights;
    std::vector<double> f;

    explicit Fixture(std::size_t n)
        : chain(build_chain(random_regular_graph(n, 4, instance_seed(42, n)), 1, 42)),
          basis(build_haar_basis(chain)),
          weights(chain),
          f(n) {
        std::mt19937_64 rng(n);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (double& x : f) x = d(rng);
    }
};

void BM_AdjointFht(benchmark::State& state) {
    const Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(adjoint_fht(fx.f, fx.basis, fx.chain));
    state.SetComplexityN(state.range(0));
}

void BM_ForwardFht(benchmark::State& state) {
    const Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_fht(fx.f, fx.basis, fx.chain, fx.weights));
    state.SetComplexityN(state.range(0));
}

void BM_DenseAdjoint(benchmark::State& state) {
    const Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dense_adjoint(fx.f, fx.basis));
    state.SetComplexityN(state.range(0));
}

void BM_DirectAdjoint(benchmark::State& state) {
    const Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(direct_adjoint(fx.f, fx.basis));
    state.SetComplexityN(state.range(0));
}

void BM_BuildBasis(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Graph g = random_regular_graph(n, 4, instance_seed(42, n));
    for (auto _ : state) {
        const auto chain = build_chain(g, 1, 42);
        benchmark::DoNotOptimize(build_haar_basis(chain));
    }
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_AdjointFht)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_ForwardFht)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_DenseAdjoint)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_DirectAdjoint)->RangeMultiplier(4)->Range(256, 4096)->Complexity();
BENCHMARK(BM_BuildBasis)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

BENCHMARK_MAIN();
