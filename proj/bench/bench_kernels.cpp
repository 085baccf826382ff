// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdarwin/chernoff.hpp"
#include "qdarwin/kernels.hpp"
#include "qdarwin/oracle.hpp"
#include "qdarwin/sweep.hpp"

using namespace qdarwin;

namespace {

FullState evolved(std::size_t n) {
    const auto model = DecoherenceModel::homogeneous(PointerModel::binary(0.25), cmaybe_component(std::numbers::pi / 4), n);
    ComplexVector v(2);
    v << 0.5, std::sqrt(0.75);
    return evolve_full(model, PureState(v));
}

std::vector<kernels::WeightedVector> view(const FullState& full) {
    std::vector<kernels::WeightedVector> out;
    for (const auto& m : full.members) out.push_back({m.weight, &m.psi});
    return out;
}

template <bool Parallel>
void BM_ReducedDensity(benchmark::State& state) {
    const auto full = evolved(static_cast<std::size_t>(state.range(0)));
    const auto members = view(full);
    const std::vector<std::size_t> keep{0, 1, 2, 3};
    for (auto _ : state) {
        auto rho = Parallel ? kernels::reduced_density(members, full.factor_dims, keep)
                            : kernels::reduced_density_serial(members, full.factor_dims, keep);
        benchmark::DoNotOptimize(rho.data());
    }
}

kernels::MeasurementGridInput grid_input() {
    const auto c = cmaybe_component(0.6);
    return {{0.25 * c.conditional_state(0).matrix(), 0.75 * c.conditional_state(1).matrix()}};
}

template <bool Parallel>
void BM_MeasurementGrid(benchmark::State& state) {
    const auto in = grid_input();
    const auto res = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto v = Parallel ? kernels::measurement_grid(in, res) : kernels::measurement_grid_serial(in, res);
        benchmark::DoNotOptimize(v.data());
    }
}

template <bool Parallel>
void BM_ChernoffScan(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<ConditionalPair> pairs;
    for (int k = 0; k < 4; ++k) {
        auto rand_rho = [&] {
            ComplexMatrix m(4, 4);
            for (Eigen::Index i = 0; i < 4; ++i)
                for (Eigen::Index j = 0; j < 4; ++j) m(i, j) = Complex(g(rng), g(rng));
            ComplexMatrix r = m * m.adjoint();
            r /= r.trace().real();
            return DensityMatrix(ComplexMatrix(0.5 * (r + r.adjoint())));
        };
        pairs.emplace_back(rand_rho(), rand_rho());
    }
    const ChernoffObjective obj(0.3, pairs);
    const auto points = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto v = Parallel ? kernels::chernoff_scan(obj, points) : kernels::chernoff_scan_serial(obj, points);
        benchmark::DoNotOptimize(v.data());
    }
}

template <bool Parallel>
void BM_ClosedFormCurve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> gsq(n, 49.0 / 64.0);
    std::vector<std::size_t> sizes;
    for (std::size_t f = 1; f <= n; ++f) sizes.push_back(f);
    for (auto _ : state) {
        auto rows = Parallel ? closed_form_curve(0.25, gsq, sizes, 0.25) : closed_form_curve_serial(0.25, gsq, sizes, 0.25);
        benchmark::DoNotOptimize(rows.data());
    }
}

}  // namespace

BENCHMARK(BM_ReducedDensity<false>)->Arg(8)->Arg(11)->Name("reduced_density/serial");
BENCHMARK(BM_ReducedDensity<true>)->Arg(8)->Arg(11)->Name("reduced_density/omp");
BENCHMARK(BM_MeasurementGrid<false>)->Arg(64)->Arg(128)->Name("measurement_grid/serial");
BENCHMARK(BM_MeasurementGrid<true>)->Arg(64)->Arg(128)->Name("measurement_grid/omp");
BENCHMARK(BM_ChernoffScan<false>)->Arg(1001)->Name("chernoff_scan/serial");
BENCHMARK(BM_ChernoffScan<true>)->Arg(1001)->Name("chernoff_scan/omp");
BENCHMARK(BM_ClosedFormCurve<false>)->Arg(1000)->Name("closed_form_curve/serial");
BENCHMARK(BM_ClosedFormCurve<true>)->Arg(1000)->Name("closed_form_curve/omp");

BENCHMARK_MAIN();
