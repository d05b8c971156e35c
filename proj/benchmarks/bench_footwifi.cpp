#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "footwifi/config.hpp"
#include "footwifi/gp_baseline.hpp"
#include "footwifi/particle_filter.hpp"
#include "footwifi/rss.hpp"
#include "footwifi/simulator.hpp"
#include "footwifi/sync.hpp"

using namespace footwifi;

namespace {

RssVector random_scan(std::mt19937_64& rng, int universe) {
  std::uniform_real_distribution<> rss(-100.0, -30.0);
  std::bernoulli_distribution present(0.7);
  RssVector v;
  for (int i = 0; i < universe; ++i) {
    if (present(rng)) v.readings["AP" + std::to_string(i)] = rss(rng);
  }
  return v;
}

std::vector<AlignedEpoch> standard_epochs() {
  ScenarioConfig sc;
  const auto truth = sim::generate_path(sim::rectangle(sc.origin, sc.width, sc.height), sc.laps,
                                        sc.step_length, sc.cadence);
  const auto steps = sim::corrupt_steps(truth, sc.imu, 1);
  const auto scans = sim::simulate_rss(truth, sc.environment(), sc.scan_period, 2);
  return align_observations(steps, scans);
}

}  // namespace

static void BM_RssDistance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = random_scan(rng, static_cast<int>(state.range(0)));
  const auto b = random_scan(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rss_distance(a, b));
}
BENCHMARK(BM_RssDistance)->Arg(12)->Arg(50)->Arg(200);

// Whole proposed-method walk over the standard scenario.
static void BM_ProposedWalk(benchmark::State& state) {
  const auto epochs = standard_epochs();
  FilterConfig c;
  c.n_particles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto e = Ensemble::initialize({0, 0}, Heading{}, c);
    for (const auto& ep : epochs) e.step(ep);
    benchmark::DoNotOptimize(e.estimate());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(epochs.size()));
}
BENCHMARK(BM_ProposedWalk)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_GpPredict(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<> pos(-10.0, 10.0);
  std::uniform_real_distribution<> rss(-90.0, -40.0);
  std::vector<TrainingSample> train;
  for (int i = 0; i < state.range(0); ++i) train.push_back({{pos(rng), pos(rng)}, rss(rng)});
  const GpHyperparams hp;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp_predict(train, {0.5, 0.5}, hp, ConstantMean{-70.0}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GpPredict)->RangeMultiplier(2)->Range(4, 256)->Complexity(benchmark::oNCubed);

static void BM_GpUpdateWeights(benchmark::State& state) {
  // Particles at the walk's truth-like positions with `range` scans nearby.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<> pos(-8.0, 8.0);
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<ObservationEntry> obs;
  for (std::size_t i = 1; i <= k + 1; ++i) {
    auto scan = random_scan(rng, 12);
    scan.t = 0.5 * static_cast<double>(i);
    obs.push_back({i, scan.t, scan, 0.7 * static_cast<double>(i)});
  }
  FilterConfig c;
  c.n_particles = 100;
  std::vector<Particle> ps;
  for (std::size_t p = 0; p < c.n_particles; ++p) {
    Particle part{{{0, 0}}, Heading{}, 1.0};
    for (std::size_t i = 1; i <= k + 1; ++i) part.trajectory.push_back({pos(rng), pos(rng)});
    ps.push_back(std::move(part));
  }
  std::map<ApId, GpMeanModel> means;
  for (const auto& [ap, v] : obs.back().rss->readings) means.emplace(ap, ConstantMean{-70.0});
  const GpHyperparams hp;
  for (auto _ : state) {
    auto e = Ensemble::restore(ps, obs, c);
    gp_update_weights(e, *obs.back().rss, hp, means);
    benchmark::DoNotOptimize(e.weights());
  }
}
BENCHMARK(BM_GpUpdateWeights)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
