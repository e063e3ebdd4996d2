// Serial reference vs OpenMP kernels on LHS-sized workloads.
//
//   ./build/bench/bench_kernels --benchmark_min_time=0.2

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "steer/kernels.hpp"
#include "steer/lhs.hpp"

using namespace steer;

namespace {

// Column block shaped like the LP in lhs_membership: m*n correlation rows
// plus the normalization row, one column per (sign pattern, grid point).
std::vector<double> lp_columns(std::size_t points, std::size_t& rows) {
  const auto grid = SphereGrid::fibonacci(points);
  const auto extremes = lhs_extreme_points(3, grid);
  rows = 10;
  std::vector<double> data;
  data.reserve(extremes.size() * rows);
  for (const auto& x : extremes) {
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) data.push_back(x(j, k));
    data.push_back(1.0);
  }
  return data;
}

std::vector<double> random_y(std::size_t rows) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> g;
  std::vector<double> y(rows);
  for (auto& v : y) v = g(gen);
  return y;
}

template <auto Kernel>
void BM_price_columns(benchmark::State& state) {
  std::size_t rows = 0;
  const auto cols = lp_columns(static_cast<std::size_t>(state.range(0)), rows);
  const auto y = random_y(rows);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(cols, rows, y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cols.size() / rows));
}

template <auto Kernel>
void BM_max_trace_norm(benchmark::State& state) {
  const auto points = lhs_extreme_points(3, SphereGrid::fibonacci(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(points));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

void BM_membership(benchmark::State& state) {
  const double s = -0.56;
  const CorrelationMatrix m(Matrix::diagonal(std::vector<double>{s, s, s}));
  const auto grid = SphereGrid::fibonacci(static_cast<std::size_t>(state.range(0)));
  MembershipOptions opts;
  opts.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(lhs_membership(m, grid, opts));
}

}  // namespace

BENCHMARK(BM_price_columns<kernels::serial::price_columns>)->Name("price_columns/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_price_columns<kernels::omp::price_columns>)->Name("price_columns/omp")->Arg(1000)->Arg(10000);
BENCHMARK(BM_max_trace_norm<kernels::serial::max_trace_norm>)->Name("max_trace_norm/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_max_trace_norm<kernels::omp::max_trace_norm>)->Name("max_trace_norm/omp")->Arg(1000)->Arg(10000);
BENCHMARK(BM_membership)->Name("lhs_membership")->ArgNames({"points", "parallel"})->Args({2000, 0})->Args({2000, 1});

BENCHMARK_MAIN();
