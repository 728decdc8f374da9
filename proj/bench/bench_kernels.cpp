// Serial reference vs OpenMP kernels:
//   platform_eq_bench --benchmark_filter=Grid
#include <benchmark/benchmark.h>

#include "platform_eq/demand.hpp"
#include "platform_eq/equilibrium.hpp"
#include "platform_eq/regions.hpp"
#include "platform_eq/verify.hpp"

using namespace peq;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_RegionGrid(benchmark::State& st) {
    const ClassifierSpec c{ClassifierSpec::Kind::Direction, Regime::CNE, Quantity::Participation, Wrt::NumPlatforms};
    GridSpec spec;
    spec.n_phi = spec.n_beta = 100;
    for (auto _ : st) benchmark::DoNotOptimize(region_grid(c, spec, true, exec_of(st)));
    label(st);
}

void BM_VerifyNash(benchmark::State& st) {
    MarketParams p = base_case();
    p.phi << 0.2, 0.03, -0.02, -0.1;
    const auto eq = solve_cne(p);
    for (auto _ : st) benchmark::DoNotOptimize(verify_nash(p, eq, 0.5, 41, exec_of(st)));
    label(st);
}

void BM_MonteCarlo(benchmark::State& st) {
    MarketParams p = base_case();
    p.n_platforms = 3;
    p.phi << 0.2, 0.1, -0.1, 0.3;
    const auto prices = PriceProfile::symmetric(3, Vec2(0.8, 0.4));
    const auto fp = share_fixed_point(p, prices);
    for (auto _ : st) benchmark::DoNotOptimize(monte_carlo_shares(p, prices, fp.state, 200000, 7, exec_of(st)));
    label(st);
}

}  // namespace

BENCHMARK(BM_RegionGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyNash)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
