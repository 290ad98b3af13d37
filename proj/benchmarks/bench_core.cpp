#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "bri/confluence.hpp"
#include "bri/parser.hpp"
#include "bri/session.hpp"
#include "bri/smt.hpp"

using namespace bri;

namespace {

std::string data(const std::string& name) { return std::string(BRI_BENCH_DATA) + "/" + name; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// G ((+) 1) n 0 takes n rule steps and n calculation steps.
void BM_NormalizeIteration(benchmark::State& state) {
  RewriteSystem sys = load_system(data("gh.sys"));
  Scope sc;
  TermP t = parse_term("G ((+) 1) " + std::to_string(state.range(0)) + " 0", sys, sc);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(t, sys));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalizeIteration)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_CriticalPeaks(benchmark::State& state) {
  RewriteSystem sys = load_system(data("gh.sys"));
  for (auto _ : state) benchmark::DoNotOptimize(critical_peaks(sys, default_solver()));
}
BENCHMARK(BM_CriticalPeaks)->Unit(benchmark::kMillisecond);

void BM_ReplayRecdown(benchmark::State& state) {
  RewriteSystem sys = load_system(data("recdown.sys"));
  std::string script = read(data("recdown.script"));
  for (auto _ : state) {
    Session s(sys, default_solver());
    s.start(sys.goals());
    benchmark::DoNotOptimize(s.run_script(script));
  }
}
BENCHMARK(BM_ReplayRecdown)->Unit(benchmark::kMillisecond);

void BM_SampleJoinability(benchmark::State& state) {
  RewriteSystem sys = load_system(data("gh.sys"));
  for (auto _ : state) benchmark::DoNotOptimize(sample_joinability(sys, default_solver(), 100, 4, 1));
}
BENCHMARK(BM_SampleJoinability)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
