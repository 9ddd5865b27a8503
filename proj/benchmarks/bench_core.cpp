#include <benchmark/benchmark.h>

#include "conglab/engine.hpp"
#include "conglab/forms.hpp"
#include "conglab/heckeops.hpp"
#include "conglab/p1rep.hpp"

using namespace conglab;

static void BM_SeriesSquareMod(benchmark::State& state) {
    const auto n = static_cast<qseries::i64>(state.range(0));
    auto pent = forms::pentagonal_series_mod(7, n);
    for (auto _ : state) {
        auto sq = qseries::mul(pent, pent);
        benchmark::DoNotOptimize(sq.raw().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SeriesSquareMod)->RangeMultiplier(4)->Range(1 << 12, 1 << 21)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_DeltaModPipeline(benchmark::State& state) {
    const auto n = static_cast<qseries::i64>(state.range(0));
    for (auto _ : state) {
        auto d = forms::delta_mod(7, n);
        benchmark::DoNotOptimize(d.raw().data());
    }
}
BENCHMARK(BM_DeltaModPipeline)->Arg(1 << 16)->Arg(1 << 19)->Arg(2000000)->Unit(benchmark::kMillisecond);

static void BM_PartitionRecurrence(benchmark::State& state) {
    const auto n = static_cast<qseries::i64>(state.range(0));
    for (auto _ : state) {
        auto p = forms::partition_mod(13, n);
        benchmark::DoNotOptimize(p.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PartitionRecurrence)->RangeMultiplier(4)->Range(1 << 12, 1 << 19)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_Scan(benchmark::State& state) {
    const auto bound = static_cast<qseries::i64>(state.range(0));
    auto d = forms::delta_mod(7, bound + 1);
    for (auto _ : state) {
        auto certs = engine::scan(d, engine::ScanParams{128, bound, 25});
        benchmark::DoNotOptimize(certs.data());
    }
}
BENCHMARK(BM_Scan)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

static void BM_SubmoduleClosure(benchmark::State& state) {
    const u64 p = static_cast<u64>(state.range(0));
    auto space = p1rep::P1Space::make(p);
    auto F = algebra::cyclotomic_field_with_root(5, p);
    for (auto _ : state) {
        auto W = p1rep::generate_submodule({p1rep::tm_vector(space, F, 1)});
        benchmark::DoNotOptimize(W.dim());
    }
}
BENCHMARK(BM_SubmoduleClosure)->Arg(7)->Arg(13)->Arg(23);

static void BM_HeckeTp(benchmark::State& state) {
    auto d = forms::delta_mod(11, 300000);
    hecke::HeckeContext ctx{12, {}, 1};
    for (auto _ : state) {
        auto t = hecke::hecke_tp(d, 2, ctx);
        benchmark::DoNotOptimize(t.raw().data());
    }
}
BENCHMARK(BM_HeckeTp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
