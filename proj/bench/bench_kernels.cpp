#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "mmc/kernels.hpp"
#include "mmc/types.hpp"

namespace {

using namespace mmc;

SaddleProblem type_problem(std::size_t n) {
  return types::reduced_problem(types::TypeClassIndex::build(2, 2, n), bsc(0.3));
}

template <void (*F)(const SaddleProblem&, std::span<const double>, std::span<double>)>
void BM_InputSums(benchmark::State& state) {
  const SaddleProblem p = type_problem(static_cast<std::size_t>(state.range(0)));
  std::vector<double> z(p.num_outputs());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = 0.5 + 0.4 * std::sin(static_cast<double>(j));
  std::vector<double> out(p.num_inputs());
  for (auto _ : state) {
    F(p, z, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["atoms"] = static_cast<double>(p.num_atoms());
}

template <double (*F)(std::span<const double>)>
void BM_LogSumExp(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  std::vector<double> t(static_cast<std::size_t>(state.range(0)));
  for (double& v : t) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(F(t));
}

}  // namespace

BENCHMARK(BM_InputSums<mmc::kernels::serial::input_sums>)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_InputSums<mmc::kernels::parallel::input_sums>)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_LogSumExp<mmc::kernels::serial::log_sum_exp>)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_LogSumExp<mmc::kernels::parallel::log_sum_exp>)->Arg(1 << 12)->Arg(1 << 18);

BENCHMARK_MAIN();
