// Microbenchmarks for the hot paths: gram assembly, the regularized solve,
// grid evaluation, node generation, brute-force fill distance and SMO
// training. Sizes are Lissajous node counts so the numbers line up with the
// convergence experiments.

#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "vsdk/geometry.hpp"
#include "vsdk/interpolation.hpp"
#include "vsdk/kernels.hpp"
#include "vsdk/phantoms.hpp"
#include "vsdk/segmentation.hpp"

namespace {

using namespace vsdk;

const KernelSpec kSpec{RbfFamily::Matern2, 1.0};

NodeSet nodes_for(int n) { return lissajous_nodes({n, n + 1, 2}); }

ScalingFunction phantom_psi() {
    static const auto phantom = std::make_shared<const Phantom>(Phantom::geometric());
    return make_phantom_scaling(phantom, 1.0);
}

void BM_LissajousNodes(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lissajous_nodes({n, n + 1, 2}));
}
BENCHMARK(BM_LissajousNodes)->Arg(10)->Arg(33);

void BM_GramPlain(benchmark::State& state) {
    const NodeSet nodes = nodes_for(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(kSpec, nullptr, nodes));
    state.SetComplexityN(static_cast<benchmark::IterationCount>(nodes.size()));
}
BENCHMARK(BM_GramPlain)->Arg(10)->Arg(20)->Complexity(benchmark::oNSquared);

void BM_GramScaled(benchmark::State& state) {
    const NodeSet nodes = nodes_for(static_cast<int>(state.range(0)));
    const ScalingFunction psi = phantom_psi();
    for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(kSpec, &psi, nodes));
}
BENCHMARK(BM_GramScaled)->Arg(10)->Arg(20);

void BM_Fit(benchmark::State& state) {
    const NodeSet nodes = nodes_for(static_cast<int>(state.range(0)));
    const Eigen::VectorXd values = sample_phantom(Phantom::geometric(), nodes);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit(nodes, values, kSpec, std::nullopt, 1e-12));
}
BENCHMARK(BM_Fit)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
    const NodeSet nodes = nodes_for(10);
    const Eigen::VectorXd values = sample_phantom(Phantom::geometric(), nodes);
    const Interpolant interp = fit(nodes, values, kSpec, phantom_psi(), 1e-12);
    const NodeSet grid = uniform_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(interp, grid));
}
BENCHMARK(BM_Evaluate)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FillDistanceBrute(benchmark::State& state) {
    const NodeSet nodes = nodes_for(10);
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fill_distance_brute(nodes, res));
}
BENCHMARK(BM_FillDistanceBrute)->Arg(201)->Arg(501)->Unit(benchmark::kMillisecond);

void BM_SvmTrain(benchmark::State& state) {
    const auto count = static_cast<int>(state.range(0));
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    NodeSet::Storage pts(2 * count, 2);
    std::vector<int> labels(static_cast<std::size_t>(2 * count));
    for (int i = 0; i < 2 * count; ++i) {
        const bool second = i >= count;
        pts(i, 0) = (second ? 0.45 : -0.45) + 0.3 * (unit(rng) - 0.5);
        pts(i, 1) = 0.3 * (unit(rng) - 0.5);
        labels[static_cast<std::size_t>(i)] = second ? 2 : 1;
    }
    const LabeledData data{NodeSet{std::move(pts)}, labels};
    const KernelSpec spec{RbfFamily::Gauss, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(svm_train(data, spec, 10.0));
}
BENCHMARK(BM_SvmTrain)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
