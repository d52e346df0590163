#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "fieldguard/decision.hpp"
#include "fieldguard/detections.hpp"
#include "fieldguard/simulator.hpp"
#include "fieldguard/wire.hpp"

namespace fg = fieldguard;

namespace {

std::vector<fg::Detection> random_frame(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> x(0, 1920), y(0, 1080), size(10, 200), conf(0.3, 1.0);
    const char* labels[] = {"bear", "cow", "speaker", "car"};
    std::vector<fg::Detection> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(fg::BBox(x(rng), y(rng), size(rng), size(rng)), labels[i % 4], conf(rng));
    }
    return out;
}

void BM_Nms(benchmark::State& state) {
    const auto dets = random_frame(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(fg::nms(dets, fg::NmsParams{}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Nms)->RangeMultiplier(4)->Range(8, 512);

void BM_ProcessFrame(benchmark::State& state) {
    const fg::CameraIntrinsics intr("c1", 4.0, 4.0, 120.0, 1920, 1080);
    const fg::RangingModel model(intr);
    const auto policy = fg::ThreatPolicy::defaults();
    fg::SpeakerRegistry registry("c1");
    for (std::uint32_t i = 1; i <= 10; ++i) registry.pin(i, fg::BBox(150.0 * i, 540.0, 16, 16));
    fg::DetectionFrame frame{"c1", 0, 0, random_frame(static_cast<std::size_t>(state.range(0)), 2)};
    for (std::uint32_t i = 1; i <= 10; ++i) frame.detections.emplace_back(fg::BBox(150.0 * i, 540.0, 16, 16), "speaker", 0.9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fg::process_frame(frame, policy, registry, model, fg::DecisionParams{}));
        ++frame.frame_index;
    }
}
BENCHMARK(BM_ProcessFrame)->Arg(8)->Arg(64);

void BM_ParseFrameLine(benchmark::State& state) {
    const fg::DetectionFrame frame{"c1", 42, 1690000000000, random_frame(static_cast<std::size_t>(state.range(0)), 3)};
    const std::string line = fg::serialize_frame(frame);
    for (auto _ : state) benchmark::DoNotOptimize(fg::parse_frame_line(line));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(line.size()));
}
BENCHMARK(BM_ParseFrameLine)->Arg(4)->Arg(32);

void BM_BearScenario(benchmark::State& state) {
    const auto scenario =
        fg::sim::load_scenario(std::filesystem::path(FIELDGUARD_FIXTURE_DIR) / "bear_scenario.json");
    for (auto _ : state) {
        std::ostringstream sink;
        fg::EventLog log(sink);
        benchmark::DoNotOptimize(fg::sim::run_scenario(scenario, log));
    }
}
BENCHMARK(BM_BearScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
