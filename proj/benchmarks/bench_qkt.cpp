#include <benchmark/benchmark.h>

#include <complex>
#include <numbers>

#include "qkt/correlations.hpp"
#include "qkt/kicked_top.hpp"
#include "qkt/spin_algebra.hpp"
#include "qkt/tridiagonal.hpp"

using namespace qkt;

namespace {

KickedTopParams fig1_params(double j) {
    KickedTopParams p;
    p.nu = std::numbers::pi / 2.0;
    p.eta = 20.0;
    p.epsilon = 0.001;
    p.spin = SpinParams::make(j);
    return p;
}

void BM_BuildSpinOperators(benchmark::State& state) {
    const double j = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto ops = build_spin_operators(SpinParams::make(j));
        benchmark::DoNotOptimize(ops.jx_spectrum.eigenvalues);
    }
}
BENCHMARK(BM_BuildSpinOperators)->Arg(50)->Arg(100)->Arg(200);

void BM_TridiagonalEigen(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd e(n - 1);
    const double j = (n - 1) / 2.0;
    for (int k = 0; k + 1 < n; ++k)
        e[k] = 0.5 * std::sqrt(j * (j + 1.0) - (j - k - 1.0) * (j - k));
    for (auto _ : state) {
        auto sol = eig_symmetric_tridiagonal(d, e);
        benchmark::DoNotOptimize(sol.eigenvalues);
    }
}
BENCHMARK(BM_TridiagonalEigen)->Arg(201)->Arg(1001);

void BM_BuildFloquet(benchmark::State& state) {
    const auto params = fig1_params(static_cast<double>(state.range(0)));
    const auto ops = build_spin_operators(params.spin);
    for (auto _ : state) {
        auto u = build_floquet(params, ops, FloquetBranch::plus);
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_BuildFloquet)->Arg(100);

void BM_FidelitySeries(benchmark::State& state) {
    const auto params = fig1_params(100.0);
    const auto ops = build_spin_operators(params.spin);
    const VectorC psi0 = spin_coherent_state(ops, random_sphere_angles(42));
    const int kicks = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto series = fidelity_series(params, ops, psi0, kicks);
        benchmark::DoNotOptimize(series.f);
    }
    state.SetItemsProcessed(state.iterations() * kicks);
}
BENCHMARK(BM_FidelitySeries)->Arg(100)->Arg(1000);

void BM_CorrelationRecord(benchmark::State& state) {
    const BellDiagonalParams c{0.95, -0.85, 0.85};
    const Complex f = std::polar(0.8, 0.2);
    for (auto _ : state) {
        auto rec = correlation_record(c, f);
        benchmark::DoNotOptimize(rec);
    }
}
BENCHMARK(BM_CorrelationRecord);

void BM_DiscordNumeric(benchmark::State& state) {
    const XState s = xstate({0.95, -0.85, 0.85}, std::polar(0.8, 0.2));
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto nd = discord_numeric(s, grid, 40);
        benchmark::DoNotOptimize(nd);
    }
}
BENCHMARK(BM_DiscordNumeric)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
