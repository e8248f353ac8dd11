#include "draftvec/pipeline.hpp"
#include "draftvec/synth.hpp"
#include "draftvec/vector_out.hpp"

#include <benchmark/benchmark.h>

using namespace draftvec;

namespace {

void BM_ProcessImage(benchmark::State& state) {
    GenSpec spec;
    spec.circles = {3, 3};
    spec.lines = {5, 5};
    spec.lights = {4, 4};
    spec.texts = {6, 6};
    const auto img = generate(spec, 7).first;
    PipelineConfig cfg;
    cfg.workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(process_image(img, cfg, "bench", "bench"));
    }
}
BENCHMARK(BM_ProcessImage)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DemoScene(benchmark::State& state) {
    const auto scene = make_demo_scene();
    const auto img = render(scene.truth);
    for (auto _ : state) {
        benchmark::DoNotOptimize(process_image(img, PipelineConfig{}, "demo", "demo"));
    }
}
BENCHMARK(BM_DemoScene)->Unit(benchmark::kMillisecond);

void BM_VectorOutput(benchmark::State& state) {
    const auto truth = make_demo_scene().truth;
    for (auto _ : state) {
        benchmark::DoNotOptimize(to_svg(truth.entities));
        benchmark::DoNotOptimize(to_dxf(truth.entities));
    }
}
BENCHMARK(BM_VectorOutput);

}  // namespace
