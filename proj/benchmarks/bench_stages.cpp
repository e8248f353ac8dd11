#include "draftvec/canny.hpp"
#include "draftvec/hough.hpp"
#include "draftvec/synth.hpp"

#include <benchmark/benchmark.h>

using namespace draftvec;

namespace {

RasterImage scene(int circles, int lines) {
    GenSpec spec;
    spec.circles = {circles, circles};
    spec.lines = {lines, lines};
    return generate(spec, 2024).first;
}

void BM_GaussianBlur(benchmark::State& state) {
    const auto img = scene(3, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gaussian_blur(img, 1.4, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_GaussianBlur)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Canny(benchmark::State& state) {
    const auto img = scene(3, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(canny(img, CannyParams{}, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_Canny)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_AccumulateLines(benchmark::State& state) {
    const auto edges = canny(scene(0, static_cast<int>(state.range(0))), CannyParams{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate_lines(edges, HoughParams{}));
    }
}
BENCHMARK(BM_AccumulateLines)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DetectLines(benchmark::State& state) {
    const auto edges = canny(scene(0, static_cast<int>(state.range(0))), CannyParams{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_lines(edges, HoughParams{}));
    }
}
BENCHMARK(BM_DetectLines)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DetectCircles(benchmark::State& state) {
    const auto stages = canny_stages(scene(static_cast<int>(state.range(0)), 0), CannyParams{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_circles(stages.edges, stages.gradients, HoughParams{}));
    }
}
BENCHMARK(BM_DetectCircles)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
