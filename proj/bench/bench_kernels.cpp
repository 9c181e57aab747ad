// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "tdosc/analytic_ck.hpp"
#include "tdosc/kernels.hpp"

namespace {

std::vector<tdosc::SeriesPoint> points(std::size_t n) {
  const tdosc::CKClosedForm form(0.5, 1.0);
  const auto profile = form.profile();
  std::vector<tdosc::SeriesPoint> pts;
  for (double t : tdosc::uniform_grid(10.0, n)) pts.push_back({profile.evaluate(t), tdosc::excitation_closed(form, t)});
  return pts;
}

std::vector<tdosc::OracleJob> jobs() {
  std::vector<tdosc::OracleJob> out;
  for (double g : {0.5, 1.0, 2.0}) {
    tdosc::OracleJob job{tdosc::CKClosedForm(g, 1.0).profile(), {}, {}, 0};
    for (int i = 1; i <= 10; ++i) job.checkpoints.push_back(0.05 * i / g);
    out.push_back(job);
  }
  return out;
}

void BM_SeriesSerial(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tdosc::serial::evaluate_series(pts, 1.0, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SeriesParallel(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tdosc::parallel::evaluate_series(pts, 1.0, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OracleSerial(benchmark::State& state) {
  const auto js = jobs();
  for (auto _ : state) benchmark::DoNotOptimize(tdosc::serial::run_oracle_batch(js));
}

void BM_OracleParallel(benchmark::State& state) {
  const auto js = jobs();
  for (auto _ : state) benchmark::DoNotOptimize(tdosc::parallel::run_oracle_batch(js));
}

}  // namespace

BENCHMARK(BM_SeriesSerial)->Arg(1000)->Arg(20000);
BENCHMARK(BM_SeriesParallel)->Arg(1000)->Arg(20000);
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  tdosc::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
