#include <benchmark/benchmark.h>

#include <random>

#include "entire/kernels.hpp"
#include "entire/polynomial.hpp"

using namespace entire;
using namespace entire::kernels;

namespace {

struct Workload {
  FixedPoly poly;
  std::vector<FixedBall> points;
};

Workload make_workload(int degree, std::size_t count) {
  std::mt19937_64 rng(11);
  std::vector<GaussianRational> c;
  for (int k = 0; k <= degree; ++k) {
    c.emplace_back(Rational(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97)));
  }
  const unsigned prec = choose_precision(degree, 4, 40);
  Workload w{make_fixed(GPoly(c), prec), {}};
  for (std::size_t k = 0; k < count; ++k) {
    Rational t(static_cast<long>(k), static_cast<long>(count));
    w.points.push_back(to_fixed(ComplexBall{GaussianRational(2 * t - 1, 1 - t), Rational(1, 1L << 40)}, prec));
  }
  return w;
}

void BM_Serial(benchmark::State& state) {
  Workload w = make_workload(static_cast<int>(state.range(0)), 4096);
  std::vector<FixedBall> out(w.points.size());
  for (auto _ : state) {
    eval_batch_serial(w.poly, w.points, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.points.size()));
}

void BM_Parallel(benchmark::State& state) {
  Workload w = make_workload(static_cast<int>(state.range(0)), 4096);
  std::vector<FixedBall> out(w.points.size());
  for (auto _ : state) {
    eval_batch(w.poly, w.points, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.points.size()));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK(BM_Parallel)->Arg(8)->Arg(32)->Arg(128);
BENCHMARK_MAIN();
