// Serial reference vs OpenMP kernels on the ghent_like raster, plus one
// Phase-2 build. Thread count follows OMP_NUM_THREADS.
#include "crnet/metrics.hpp"
#include "crnet/optimizer.hpp"
#include "crnet/propagation.hpp"
#include "crnet/scenario.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace crnet;

namespace {

const Scenario& ghent()
{
    static const Scenario s = load_scenario_file(std::filesystem::path(CRNET_DATA_DIR) / "ghent_like.json");
    return s;
}

std::vector<Emitter> site_emitters(const Scenario& s)
{
    std::vector<Emitter> out;
    for (const auto& site : s.candidate_sites) {
        out.push_back({site.position, site.max_eirp_dbm, s.channels.back().center_frequency_mhz, EmitterKind::cr_bs});
    }
    return out;
}

std::vector<ChannelEmitter> carriers(const Scenario& s)
{
    std::vector<ChannelEmitter> out;
    int c = 0;
    for (const auto& e : site_emitters(s)) {
        out.push_back({e, c++ % s.s_max()});
    }
    return out;
}

void field_reference(benchmark::State& state)
{
    const auto& s = ghent();
    const auto em = site_emitters(s);
    const auto lattice = s.lattice();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::field_grid(em, lattice, s.path_loss));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(lattice.size() * em.size()));
}

void field_openmp(benchmark::State& state)
{
    const auto& s = ghent();
    const auto em = site_emitters(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(field_grid(em, s));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.lattice().size() * em.size()));
}

void white_space_reference(benchmark::State& state)
{
    const auto& s = ghent();
    const auto tv = tv_channel_emitters(s);
    const auto cr = carriers(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::white_space_map(tv, cr, s));
    }
}

void white_space_openmp(benchmark::State& state)
{
    const auto& s = ghent();
    const auto tv = tv_channel_emitters(s);
    const auto cr = carriers(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(white_space_map(tv, cr, s));
    }
}

void phase2(benchmark::State& state)
{
    const auto& s = ghent();
    std::vector<std::uint64_t> seeds(10);
    std::iota(seeds.begin(), seeds.end(), 1);
    const auto h = phase1_histogram(s, seeds);
    const PlanContext ctx(s, select_sites(s, h, 22));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase2_optimize(ctx, {0.25, 0.25, 0.5}, seed++));
    }
}

} // namespace

BENCHMARK(field_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(field_openmp)->Unit(benchmark::kMillisecond);
BENCHMARK(white_space_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(white_space_openmp)->Unit(benchmark::kMillisecond);
BENCHMARK(phase2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
