// Serial reference against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include "floation/complex.hpp"
#include "floation/floation3.hpp"
#include "floation/order_io.hpp"
#include "floation/straighten.hpp"

using namespace flo;

namespace {

struct Oct8 {
    Triangulation2 t = load_triangulation2(bundled_complex("OCT8"));
    HyperbolicModel m = build_model(t);
    OrderOracle o = load_order_file(std::filesystem::path(FLOATION_DATA_DIR) / "orders/oct8_surface_lex.json",
                                    {t.basis, t.relators, 2048});
    LiftedBall ball = build_ball(t, o, Valuation::functional(o), std::nullopt);
};

const Oct8& oct8() {
    static const Oct8 w;
    return w;
}

const Triangulation3& cube() {
    static const Triangulation3 t = load_triangulation3(bundled_complex("T3CUBE"));
    return t;
}

StraightenConfig config(benchmark::State& state) {
    StraightenConfig cfg;
    cfg.samples = static_cast<std::size_t>(state.range(0));
    return cfg;
}

void BM_StraightenSerial(benchmark::State& state) {
    const auto& w = oct8();
    auto cfg = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(straighten_lamination_serial(w.m, w.ball, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StraightenParallel(benchmark::State& state) {
    const auto& w = oct8();
    auto cfg = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(straighten_lamination(w.m, w.ball, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnumerateSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_directions_serial(cube()));
    state.SetItemsProcessed(state.iterations() * 128);
}

void BM_EnumerateParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_directions(cube()));
    state.SetItemsProcessed(state.iterations() * 128);
}

}  // namespace

BENCHMARK(BM_StraightenSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StraightenParallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnumerateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnumerateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
