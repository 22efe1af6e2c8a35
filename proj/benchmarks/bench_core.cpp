#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "thetasub/data.hpp"
#include "thetasub/likelihood.hpp"
#include "thetasub/mcmc.hpp"
#include "thetasub/model.hpp"
#include "thetasub/paths.hpp"
#include "thetasub/random.hpp"
#include "thetasub/specfun.hpp"

using namespace thetasub;

namespace
{
//---------------------------------------------------------------------------//
void BM_ExpIntegralE1(benchmark::State& state)
{
    std::vector<double> z(1024);
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = 1e-6 * std::pow(5e7, static_cast<double>(i) / 1023.0);
    for (auto _ : state)
    {
        for (double x : z)
            benchmark::DoNotOptimize(exp_integral_e1(x));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(z.size()));
}
BENCHMARK(BM_ExpIntegralE1);

//---------------------------------------------------------------------------//
void BM_LogGammaIncrements(benchmark::State& state)
{
    std::vector<double> out(static_cast<std::size_t>(state.range(0)));
    RngStream rng(stream_key(1, {}));
    double const shape = 1.0 / static_cast<double>(state.range(1));
    for (auto _ : state)
    {
        sample_log_increments(shape, 1.0, out, rng);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogGammaIncrements)->Args({1000, 1})->Args({1000, 100});

//---------------------------------------------------------------------------//
void BM_RefreshSweep(benchmark::State& state)
{
    auto const data = synth_two_gamma(2.0, 0.4, 0.2, 0.04, 200, 1000, 3);
    ModelParams p;
    p.alpha = 1.8;
    p.beta = data.truth.beta();
    p.bin_edges = {1, 2, 4};
    p.theta_slopes = {0.1, -0.2, 0.05};
    p.theta_intercepts = {0.1, 0.2, -0.1};
    ChainState chain = init_chain(data.obs, p, static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(refresh_segments(chain));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_RefreshSweep)->Arg(10)->Arg(50);

//---------------------------------------------------------------------------//
void BM_ParamsLogRatio(benchmark::State& state)
{
    ModelParams a;
    a.alpha = 1.8;
    a.beta = 0.44;
    a.bin_edges = {1, 2, 4};
    a.theta_slopes = {0.1, -0.2, 0.05};
    a.theta_intercepts = {0.1, 0.2, -0.1};
    ModelParams b = a;
    b.alpha = 1.82;
    BinStats st(3, 200);
    for (std::size_t k = 0; k <= 3; ++k)
    {
        st.jump_sum[k] = 10.0 * static_cast<double>(k + 1);
        st.jump_count[k] = static_cast<std::int64_t>(5 * (k + 1));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(loglik_ratio_params(st, a, b));
}
BENCHMARK(BM_ParamsLogRatio);

}  // namespace

BENCHMARK_MAIN();
