// Throughput of the numerical kernels that dominate the command-line runs.

#include "qpsl/cocycle.hpp"
#include "qpsl/fourier.hpp"
#include "qpsl/homological.hpp"
#include "qpsl/kam.hpp"
#include "qpsl/potential.hpp"
#include "qpsl/sl2.hpp"
#include "qpsl/spectrum.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace qpsl;

namespace {

const std::vector<double> kAlpha{0.6180339887498949};

// Decaying su(1,1)-valued series on 𝕋 with 2·degree+1 modes per entry.
MatrixSeries su11_series(std::int64_t degree, double eps, std::uint64_t seed, bool with_mean = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    MatrixSeries F(1, false, ValueKind::Matrix);
    for (std::int64_t n = -degree; n <= degree; ++n) {
        if (!with_mean && n == 0) continue;
        const double s = eps * std::exp(-std::abs(static_cast<double>(n)) / 4.0);
        Mat2 up = Mat2::Zero(), lo = Mat2::Zero();
        up(0, 1) = s * cplx(g(rng), g(rng));
        lo(1, 0) = std::conj(up(0, 1));
        F.add({n}, up);
        F.add({-n}, lo);
        if (n >= 0) {
            const cplx u = n == 0 ? cplx(s * g(rng), 0.0) : s * cplx(g(rng), g(rng));
            Mat2 d = Mat2::Zero();
            d(0, 0) = cplx(0.0, 1.0) * u;
            d(1, 1) = -d(0, 0);
            F.add({n}, d);
            if (n > 0) F.add({-n}, -d.conjugate());
        }
    }
    return F;
}

Mat2 elliptic(double rho) { return su11_element(std::polar(1.0, 2.0 * M_PI * rho), 0.0); }

void BM_RotationNumber(benchmark::State& state) {
    const auto c = schrodinger_cocycle(amo_potential(0.5), kAlpha, 0.3);
    RotationOptions opt;
    opt.iters = state.range(0);
    opt.phase_samples = 1;
    for (auto _ : state) benchmark::DoNotOptimize(rotation_number(c, opt).rho);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RotationNumber)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_FiniteIds(benchmark::State& state) {
    const auto V = amo_potential(0.5);
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(finite_ids(V, kAlpha, {0.1}, N, 0.2));
    state.SetComplexityN(N);
}
BENCHMARK(BM_FiniteIds)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_SeriesMultiply(benchmark::State& state) {
    const auto F = su11_series(state.range(0), 1e-2, 1), G = su11_series(state.range(0), 1e-2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(multiply(F, G).size());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SeriesMultiply)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oNSquared);

void BM_HomologicalDiagonal(benchmark::State& state) {
    const auto F = su11_series(state.range(0), 1e-2, 3, false);
    const Mat2 A = elliptic(0.1234);
    for (auto _ : state) benchmark::DoNotOptimize(solve_homological(A, F, kAlpha).size());
}
BENCHMARK(BM_HomologicalDiagonal)->Arg(16)->Arg(64);

void BM_HomologicalKronecker(benchmark::State& state) {
    const auto F = su11_series(state.range(0), 1e-2, 4, false);
    const cplx b(0.1, 0.05);
    const Mat2 A = su11_element(std::sqrt(1.0 + std::norm(b)) * std::polar(1.0, 2.0 * M_PI * 0.1234), b);
    for (auto _ : state) benchmark::DoNotOptimize(solve_homological(A, F, kAlpha).size());
}
BENCHMARK(BM_HomologicalKronecker)->Arg(16)->Arg(64);

void BM_NewtonRemoval(benchmark::State& state) {
    const auto F = su11_series(6, 1e-3, 5);
    NewtonOptions opt;
    opt.max_degree = static_cast<double>(state.range(0));
    const auto mask = nonresonant_mask(opt.max_degree, false);
    const Mat2 A = elliptic(0.1234);
    for (auto _ : state) benchmark::DoNotOptimize(remove_nonresonant(A, F, kAlpha, mask, opt).residual);
}
BENCHMARK(BM_NewtonRemoval)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_KamStep(benchmark::State& state) {
    KamParams p;
    p.max_degree = static_cast<double>(state.range(0));
    const auto s = make_state(elliptic(0.1234), su11_series(5, 1e-3, 6), kAlpha);
    for (auto _ : state) benchmark::DoNotOptimize(kam_step(s, p).second.conj_residual);
}
BENCHMARK(BM_KamStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
