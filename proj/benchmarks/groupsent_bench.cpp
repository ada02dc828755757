#include <benchmark/benchmark.h>

#include <cmath>

#include "groupsent/classifier.hpp"
#include "groupsent/grouping.hpp"
#include "groupsent/matching.hpp"
#include "groupsent/orientation.hpp"
#include "groupsent/pyramid.hpp"
#include "groupsent/rng.hpp"

namespace gs = groupsent;

namespace {

gs::GrayImage noise(int w, int h, std::uint64_t seed) {
    gs::SplitMix64 rng(seed);
    gs::GrayImage img(w, h);
    for (double& v : img.values()) v = static_cast<double>(rng.bounded(256));
    return img;
}

void BM_Pyramid(benchmark::State& state) {
    const auto face = noise(48, 48, 1);
    for (auto _ : state) benchmark::DoNotOptimize(gs::extract_face_features(face));
}
BENCHMARK(BM_Pyramid);

void BM_Hog(benchmark::State& state) {
    const auto window = noise(64, 128, 2);
    for (auto _ : state) benchmark::DoNotOptimize(gs::extract_hog(window));
}
BENCHMARK(BM_Hog);

void BM_SvmTrain(benchmark::State& state) {
    gs::SplitMix64 rng(3);
    gs::Dataset d;
    const auto dim = static_cast<std::size_t>(state.range(1));
    for (int i = 0; i < state.range(0); ++i) {
        std::vector<double> row(dim);
        for (double& v : row) v = rng.normal() + (i % 4);
        d.add(std::move(row), i % 4);
    }
    gs::SvmConfig cfg;
    cfg.epochs = 20;
    for (auto _ : state) benchmark::DoNotOptimize(gs::train(d, cfg));
}
BENCHMARK(BM_SvmTrain)->Args({200, 188})->Args({200, 3780});

void BM_Matching(benchmark::State& state) {
    gs::SplitMix64 rng(4);
    std::vector<gs::Box> persons, faces, torsos;
    auto box = [&](double w, double h) {
        const double x = rng.uniform() * 900;
        const double y = rng.uniform() * 500;
        return gs::Box{x, y, x + w, y + h};
    };
    for (int i = 0; i < state.range(0); ++i) {
        persons.push_back(box(80, 200));
        faces.push_back(box(20, 20));
        torsos.push_back(box(40, 60));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(gs::match_faces(gs::dedupe_faces(faces, 0.3), persons));
        benchmark::DoNotOptimize(gs::match_torsos(torsos, persons));
    }
}
BENCHMARK(BM_Matching)->Arg(5)->Arg(50);

void BM_SelectK(benchmark::State& state) {
    gs::SplitMix64 rng(5);
    std::vector<gs::PersonPoint> pts;
    for (int i = 0; i < state.range(0); ++i) {
        const double a = rng.uniform() * 6.283185307179586;
        pts.push_back({{rng.uniform() * 20, rng.uniform() * 20}, {std::cos(a), std::sin(a)}, i});
    }
    for (auto _ : state) benchmark::DoNotOptimize(gs::select_k(pts, gs::GroupingConfig{}, 7));
}
BENCHMARK(BM_SelectK)->Arg(6)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
