#include <benchmark/benchmark.h>

#include <vector>

#include "mrftrack/condensation.hpp"
#include "mrftrack/mcmc.hpp"
#include "mrftrack/simulator.hpp"

using namespace mrftrack;

namespace {

struct Scene {
    ScenarioConfig cfg;
    LabeledFrame frame;
    TemplateModel model{{0.5, 0.1}, {0.7, 0.1}};

    Scene() {
        ScenarioStream s(cfg);
        frame = s.next();
    }
};

const Scene& scene() {
    static const Scene s;
    return s;
}

void BM_LogLikelihood(benchmark::State& state) {
    const Scene& s = scene();
    const TargetState t = s.frame.truth[0];
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_likelihood(s.frame.frame, t, s.model));
    }
}
BENCHMARK(BM_LogLikelihood);

void BM_RectOverlap(benchmark::State& state) {
    const TargetState a{100.0, 100.0, 0.3};
    const TargetState b{112.0, 104.0, 1.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rect_overlap_count(a, b, {32, 10}));
    }
}
BENCHMARK(BM_RectOverlap);

void BM_McmcStep(benchmark::State& state) {
    const Scene& s = scene();
    McmcConfig cfg;
    cfg.n_samples = static_cast<std::size_t>(state.range(0));
    SampleSet prev;
    prev.samples.assign(cfg.n_samples, JointParticle{s.frame.truth});
    const MrfGraph graph = build_mrf(s.frame.truth, cfg.interaction);
    Rng rng = make_rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcmc_mrf_step(prev, s.frame.frame, s.model, graph, cfg, rng));
    }
}
BENCHMARK(BM_McmcStep)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CondensationStep(benchmark::State& state) {
    const Scene& s = scene();
    CondensationConfig cfg;
    cfg.particles_per_target = static_cast<std::size_t>(state.range(0));
    const WeightedParticleSet prev = WeightedParticleSet::at_poses(s.frame.truth, cfg.particles_per_target);
    Rng rng = make_rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(condensation_step(prev, s.frame.frame, s.model, cfg, rng));
    }
}
BENCHMARK(BM_CondensationStep)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RenderFrame(benchmark::State& state) {
    const Scene& s = scene();
    Rng rng = make_rng(2);
    const WorldState w = init_world(s.cfg, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(w, s.cfg, rng));
    }
}
BENCHMARK(BM_RenderFrame)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
