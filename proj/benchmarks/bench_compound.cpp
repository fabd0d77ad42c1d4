#include <benchmark/benchmark.h>

#include <random>

#include "kcontract/compound.hpp"
#include "kcontract/dynamics.hpp"
#include "kcontract/systems.hpp"

using namespace kcontract;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  Matrix a(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      a(i, j) = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    }
  return a;
}

void BM_mult_compound(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const Matrix a = random_matrix(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mult_compound(a, k));
  }
}
BENCHMARK(BM_mult_compound)->Args({4, 2})->Args({6, 3})->Args({8, 4})->Args({10, 5});

void BM_add_compound(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const Matrix a = random_matrix(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(add_compound(a, k));
  }
}
BENCHMARK(BM_add_compound)->Args({4, 2})->Args({6, 3})->Args({8, 4})->Args({10, 5});

void BM_wedge(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  std::vector<Vector> vs;
  for (std::size_t j = 0; j < k; ++j) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    }
    vs.push_back(std::move(v));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(wedge(vs));
  }
}
BENCHMARK(BM_wedge)->Args({5, 2})->Args({8, 3})->Args({12, 4});

void BM_sym_eigen(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix a = random_matrix(rng, n, n);
  a += a.transposed();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sym_eigen(a));
  }
}
BENCHMARK(BM_sym_eigen)->Arg(2)->Arg(4)->Arg(8)->Arg(12);

void BM_integrate_compound_hopf(benchmark::State& state) {
  const SystemModel hopf = systems::hopf();
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_compound(hopf, Vector{2.0, 0.0}, 2, Vector{1.0}, t_end, 1e-3));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t_end * 1000));
}
BENCHMARK(BM_integrate_compound_hopf)->Arg(1)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
