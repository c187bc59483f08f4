#include <benchmark/benchmark.h>


#include "cwblowup/grid.hpp"
#include "cwblowup/simulator.hpp"
#include "cwblowup/stepper.hpp"
#include "cwblowup/tridiag.hpp"

using namespace cwblowup;

namespace {

void BM_Tridiag(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  TriDiagSystem sys{std::vector<double>(n - 1, -1.0), std::vector<double>(n, 3.0), std::vector<double>(n - 1, -1.0),
                    std::vector<double>(n, 1.0)};
  for (auto _ : st) benchmark::DoNotOptimize(solve_tridiag(sys));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Tridiag)->RangeMultiplier(8)->Range(8, 1 << 15);

void BM_Step(benchmark::State& st) {
  SimParams p;
  p.q = st.range(1) == 0 ? 1.0 : 1.2;
  const Grid g = Grid::with_intervals(static_cast<int>(st.range(0)));
  const auto s = make_initial(p, InitialData::sine_bump(), g);
  for (auto _ : st) benchmark::DoNotOptimize(step(s, g, p));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Step)->ArgsProduct({{40, 400, 4000}, {0, 1}});

void BM_RunToBlowup(benchmark::State& st) {
  SimParams p;
  p.p = 3.0;
  p.q = st.range(0) == 0 ? 1.0 : 1.2;
  for (auto _ : st) benchmark::DoNotOptimize(run(p, InitialData::sine_bump()).outcome.t_num_partial);
}
BENCHMARK(BM_RunToBlowup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
