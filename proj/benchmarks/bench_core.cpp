#include "squidqed/circuit.hpp"
#include "squidqed/dynamics.hpp"
#include "squidqed/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace squidqed;

namespace {

const circuit::TruncatedModel& model()
{
    static const auto m =
        circuit::truncate_to_eigenbasis(circuit::CircuitParams::defaults(), circuit::default_resonance_flux);
    return m;
}

void BM_TruncateModel(benchmark::State& state)
{
    circuit::TruncationSettings s;
    s.pre_dim = state.range(0);
    s.check_convergence = false;
    const auto params = circuit::CircuitParams::defaults();
    for (auto _ : state) {
        benchmark::DoNotOptimize(circuit::truncate_to_eigenbasis(params, circuit::default_resonance_flux, s));
    }
}
BENCHMARK(BM_TruncateModel)->Arg(40)->Arg(80);

void BM_ProtocolHamiltonian(benchmark::State& state)
{
    const circuit::ProtocolHamiltonian h(model(), circuit::FluxDrive{});
    double t = 326.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(h(t));
        t += 1e-3;
    }
}
BENCHMARK(BM_ProtocolHamiltonian);

void BM_TdseRamp(benchmark::State& state)
{
    experiments::RampConfig cfg;
    cfg.drive.ramp_start = 20.0;
    cfg.t_end = 100.0;
    cfg.integrator.method = state.range(0) == 0 ? dynamics::Method::rk4 : dynamics::Method::adaptive;
    for (auto _ : state) {
        benchmark::DoNotOptimize(experiments::run_ramp(cfg, model()));
    }
}
BENCHMARK(BM_TdseRamp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LindbladRamp(benchmark::State& state)
{
    experiments::RampConfig cfg;
    cfg.drive.ramp_start = 20.0;
    cfg.t_end = 100.0;
    auto baths = dynamics::BathParams::defaults(model().params);
    baths.gamma_field = baths.gamma_ring = 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(experiments::run_lindblad_ramp(cfg, model(), baths));
    }
}
BENCHMARK(BM_LindbladRamp)->Unit(benchmark::kMillisecond);

void BM_SweepPoint(benchmark::State& state)
{
    const experiments::SweepConfig cfg;
    const experiments::ModelSettings settings;
    for (auto _ : state) {
        benchmark::DoNotOptimize(experiments::sweep_point(cfg, settings, 0.428));
    }
}
BENCHMARK(BM_SweepPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
