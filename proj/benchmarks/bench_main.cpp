#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "invlab/audits.hpp"
#include "invlab/dynamics.hpp"
#include "invlab/forces.hpp"
#include "invlab/frames.hpp"
#include "invlab/galileo.hpp"

using namespace invlab;

namespace
{

void BM_Oplus(benchmark::State& state)
{
    auto g = std::make_shared<galileo::GFunction const>(
        state.range(0) == 0 ? galileo::GFunction::lorentz_type(1.0) : galileo::GFunction::rational_type(1.0));
    galileo::BoundedVelocity const u({0.5, 0.2, 0.1}, g);
    galileo::BoundedVelocity const v({-0.3, 0.6, 0.0}, g);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(galileo::oplus(u, v));
    }
}
BENCHMARK(BM_Oplus)->Arg(0)->Arg(1);

void BM_Compose(benchmark::State& state)
{
    std::mt19937_64 rng(7);
    FrameTransform const a = random_transform(rng);
    FrameTransform const b = random_transform(rng);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(compose(a, b));
    }
}
BENCHMARK(BM_Compose);

void BM_Integrate(benchmark::State& state)
{
    Method const method = state.range(0) == 0 ? Method::rk4 : Method::verlet;
    Body const a("A", 1.0, {}, {0, 0, 0}, {0, 0, 0});
    Body const b("B", 1e-3, {}, {1, 0, 0}, {0, 1, 0});
    ForceLaw const law = laws::gravity(1.0);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(integrate(a, b, law, 10.0, 1e-3, method));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
