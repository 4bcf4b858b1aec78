// Serial reference kernels vs the OpenMP versions used by the solvers; run
// with --benchmark_filter=matvec etc. to narrow.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "sprec/linalg.hpp"
#include "sprec/rng.hpp"
#include "sprec/xupdate.hpp"

namespace {

sprec::DenseMatrix make_matrix(std::size_t rows, std::size_t cols) {
    sprec::DenseMatrix a(rows, cols);
    sprec::Rng rng(0xBE5C4ull);
    for (double& v : a.data()) v = 2.0 * rng.uniform01() - 1.0;
    return a;
}

std::vector<double> make_vec(std::size_t n) {
    std::vector<double> v(n);
    sprec::Rng rng(0x5EEDull);
    for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
    return v;
}

template <void (*Kernel)(const sprec::DenseMatrix&, std::span<const double>, std::span<double>)>
void bm_matvec(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto cols = static_cast<std::size_t>(state.range(1));
    const sprec::DenseMatrix a = make_matrix(rows, cols);
    const std::vector<double> x = make_vec(cols);
    std::vector<double> y(rows);
    for (auto _ : state) {
        Kernel(a, x, y);
        benchmark::DoNotOptimize(y.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * rows * cols);
}

template <void (*Kernel)(const sprec::DenseMatrix&, std::span<const double>, std::span<double>)>
void bm_matvec_t(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto cols = static_cast<std::size_t>(state.range(1));
    const sprec::DenseMatrix a = make_matrix(rows, cols);
    const std::vector<double> x = make_vec(rows);
    std::vector<double> y(cols);
    for (auto _ : state) {
        Kernel(a, x, y);
        benchmark::DoNotOptimize(y.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * rows * cols);
}

template <sprec::DenseMatrix (*Kernel)(const sprec::DenseMatrix&, double)>
void bm_scaled_gram(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto cols = static_cast<std::size_t>(state.range(1));
    const sprec::DenseMatrix a = make_matrix(rows, cols);
    for (auto _ : state) {
        sprec::DenseMatrix g = Kernel(a, 0.1);
        benchmark::DoNotOptimize(g.data().data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * rows * rows * cols);
}

void bm_xupdate_solve(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto cols = static_cast<std::size_t>(state.range(1));
    const sprec::DenseMatrix a = make_matrix(rows, cols);
    const std::vector<double> b = make_vec(rows);
    const std::vector<double> u = make_vec(cols), w = make_vec(cols);
    const sprec::XUpdateCache cache(a, b, 0.1);
    for (auto _ : state) {
        std::vector<double> x = cache.solve(u, w);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * rows * cols);
}

void shapes(benchmark::internal::Benchmark* b) {
    b->Args({150, 512})->Args({256, 2048})->Args({512, 4096});
}

}  // namespace

BENCHMARK(bm_matvec<sprec::serial::matvec>)->Name("matvec/serial")->Apply(shapes);
BENCHMARK(bm_matvec<sprec::matvec>)->Name("matvec/openmp")->Apply(shapes);
BENCHMARK(bm_matvec_t<sprec::serial::matvec_t>)->Name("matvec_t/serial")->Apply(shapes);
BENCHMARK(bm_matvec_t<sprec::matvec_t>)->Name("matvec_t/openmp")->Apply(shapes);
BENCHMARK(bm_scaled_gram<sprec::serial::scaled_gram>)->Name("scaled_gram/serial")->Apply(shapes);
BENCHMARK(bm_scaled_gram<sprec::scaled_gram>)->Name("scaled_gram/openmp")->Apply(shapes);
BENCHMARK(bm_xupdate_solve)->Name("xupdate_solve")->Apply(shapes);

BENCHMARK_MAIN();
