#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

#include "dalat/calculus.hpp"
#include "dalat/rational.hpp"
#include "dalat/realization.hpp"

using namespace dalat;

namespace {

const LatticePtr& patch(int radius) {
  static std::map<int, LatticePtr> cache;
  auto& p = cache[radius];
  if (!p) p = make_lattice(LatticeKind::rhombic, radius);
  return p;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void set_label(benchmark::State& state) { state.SetLabel(state.range(1) ? "parallel" : "serial"); }

void BM_exp_basis(benchmark::State& state) {
  const auto& lat = patch(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exp_basis(lat, Complex(0.3, 0.2), exec_of(state)));
  set_label(state);
}

void BM_resolvent(benchmark::State& state) {
  const auto& lat = patch(int(state.range(0)));
  CMatrix A = CMatrix::Random(4, 4);
  A *= 0.5 / A.norm();
  for (auto _ : state) benchmark::DoNotOptimize(resolvent(A, lat, exec_of(state)));
  set_label(state);
}

void BM_forward_shift(benchmark::State& state) {
  const auto& lat = patch(int(state.range(0)));
  const auto f = exp_basis(lat, Complex(0.3, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(forward_shift(f, {}, exec_of(state)));
  set_label(state);
}

void BM_gram(benchmark::State& state) {
  const auto& lat = patch(6);
  std::vector<std::size_t> w(std::size_t(state.range(0)));
  std::iota(w.begin(), w.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(lat, w, 4.0, exec_of(state)));
  set_label(state);
}

}  // namespace

BENCHMARK(BM_exp_basis)->ArgsProduct({{10, 40, 80}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_resolvent)->ArgsProduct({{10, 40}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_forward_shift)->ArgsProduct({{10, 40}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gram)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
