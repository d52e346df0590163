#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "fieldguard/errors.hpp"
#include "fieldguard/optics.hpp"
#include "fieldguard/simulator.hpp"
#include "fieldguard/wire.hpp"

namespace fg = fieldguard;
namespace sim = fieldguard::sim;

namespace {

fg::CameraIntrinsics prototype() { return fg::CameraIntrinsics("c", 4.0, 4.0, 120.0, 1920, 1080); }

sim::Scenario bear_scenario() {
    return sim::load_scenario(std::filesystem::path(FIELDGUARD_FIXTURE_DIR) / "bear_scenario.json");
}

std::string run_to_text(const sim::Scenario& s, sim::ScenarioMetrics* metrics = nullptr) {
    std::ostringstream sink;
    fg::EventLog log(sink);
    const auto run = sim::run_scenario(s, log);
    if (metrics) *metrics = run.metrics;
    return sink.str();
}

}  // namespace

TEST(Step, BearMovesAtSpeciesSpeed) {
    sim::Scenario s;
    s.layout = sim::make_corner_layout(100, 60, prototype(), 2);
    s.agents.push_back(sim::make_agent("bear", {0, 0}, {3, 0}, 0.0, s.species));
    const auto next = sim::step(sim::initial_state(s), 1.5);
    EXPECT_NEAR(next.agents[0].position.x, 2.55, 1e-12);
    EXPECT_NEAR(next.agents[0].position.y, 0.0, 1e-12);
    EXPECT_NEAR(next.time_s, 1.5, 1e-12);
}

TEST(Step, RejectsNonPositiveDt) {
    const sim::SimState s;
    EXPECT_THROW(sim::step(s, 0.0), fg::DomainError);
    EXPECT_THROW(sim::step(s, -1.0), fg::DomainError);
}

TEST(Step, SplitStepsCompose) {
    sim::Scenario s;
    s.layout = sim::make_corner_layout(100, 60, prototype(), 2);
    s.agents.push_back(sim::make_agent("bear", {5, 5}, {1, 2}, 0.0, s.species));
    s.agents.push_back(sim::make_agent("bear", {5, 5}, {-1, 0}, 0.4, s.species));
    const auto whole = sim::step(sim::initial_state(s), 1.5);
    const auto halves = sim::step(sim::step(sim::initial_state(s), 0.75), 0.75);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(whole.agents[i].position.x, halves.agents[i].position.x, 1e-12);
        EXPECT_NEAR(whole.agents[i].position.y, halves.agents[i].position.y, 1e-12);
    }
}

TEST(Step, LateEntryOnlyMovesAfterAppearing) {
    sim::Scenario s;
    s.layout = sim::make_corner_layout(100, 60, prototype(), 1);
    s.agents.push_back(sim::make_agent("bear", {0, 0}, {1, 0}, 1.0, s.species));
    const auto init = sim::initial_state(s);
    EXPECT_FALSE(init.agents[0].active);
    const auto next = sim::step(init, 1.5);
    EXPECT_TRUE(next.agents[0].active);
    EXPECT_NEAR(next.agents[0].position.x, 0.85, 1e-12);
}

TEST(Synthesize, SixMetersIsFiftyPixels) {
    // 4 mm / 4 um / 120 m: 0.12 m per pixel.
    sim::Scenario s;
    s.layout = sim::make_corner_layout(100, 60, prototype(), 0);
    s.layout.speakers = {{1, {30, 30}}, {2, {30 + 6 / std::sqrt(2.0), 30 - 6 / std::sqrt(2.0)}}};
    const auto frame = sim::synthesize_frame(s, sim::SimState{}, 0, 0);
    ASSERT_EQ(frame.detections.size(), 2u);
    EXPECT_NEAR(fg::center_distance_px(frame.detections[0].bbox(), frame.detections[1].bbox()), 50.0, 1e-9);
}

TEST(Synthesize, OutOfViewObjectIsAbsent) {
    sim::Scenario s;
    s.layout = sim::make_corner_layout(100, 60, prototype(), 1);
    s.agents.push_back(sim::make_agent("bear", {-10, 30}, {1, 0}, 0.0, s.species));
    const auto frame = sim::synthesize_frame(s, sim::initial_state(s), 0, 3);
    ASSERT_EQ(frame.detections.size(), 1u);
    EXPECT_EQ(frame.detections[0].class_label(), "speaker");
    EXPECT_EQ(frame.frame_index, 3u);
}

TEST(Synthesize, NoiseScalesGroundDistances) {
    sim::Scenario s;
    s.layout = sim::make_corner_layout(100, 60, prototype(), 0);
    s.layout.speakers = {{1, {30, 30}}, {2, {31.52, 30}}};
    const auto frame = sim::synthesize_frame(s, sim::SimState{}, 0, 0, 1.177);
    const double px = fg::center_distance_px(frame.detections[0].bbox(), frame.detections[1].bbox());
    EXPECT_NEAR(px * 0.12, 1.79, 0.001);
}

TEST(Synthesize, ZeroNoiseRoundTrip) {
    const auto layout = sim::make_corner_layout(100, 60, prototype(), 0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0, 100), uy(0, 60);
    for (int i = 0; i < 200; ++i) {
        const fg::Vec2 a{ux(rng), uy(rng)};
        const fg::Vec2 b{ux(rng), uy(rng)};
        for (const auto& cam : layout.cameras) {
            const fg::Vec2 pa = sim::world_to_image(cam, a);
            const fg::Vec2 pb = sim::world_to_image(cam, b);
            const double meters = fg::norm(pa - pb) * cam.intrinsics.range_m() * fg::ifov(cam.intrinsics);
            EXPECT_NEAR(meters, fg::distance(a, b), 1e-6);
        }
    }
}

TEST(Layout, CornersCoverTheField) {
    const auto layout = sim::make_corner_layout(100, 60, prototype(), 3);
    ASSERT_EQ(layout.cameras.size(), 4u);
    EXPECT_EQ(layout.cameras[2].intrinsics.camera_id(), "c3");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0, 100), uy(0, 60);
    for (int i = 0; i < 1000; ++i) {
        const fg::Vec2 p{ux(rng), uy(rng)};
        int seen = 0;
        for (const auto& c : layout.cameras) seen += fg::in_field_of_view(c.pose, c.intrinsics, p) ? 1 : 0;
        EXPECT_EQ(seen, 4) << p.x << "," << p.y;
    }
}

TEST(Layout, SpeakersEvenlySpaced) {
    const auto layout = sim::make_corner_layout(100, 60, prototype(), 4);
    ASSERT_EQ(layout.speakers.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(layout.speakers[i].id, i + 1);
        EXPECT_DOUBLE_EQ(layout.speakers[i].position.x, 20.0 * static_cast<double>(i + 1));
        EXPECT_DOUBLE_EQ(layout.speakers[i].position.y, 30.0);
    }
}

TEST(Scenario, RejectsSlowTicksAndUnknownSpecies) {
    auto s = bear_scenario();
    s.tick_s = 2.0;
    EXPECT_THROW(sim::validate(s), fg::ConfigError);
    s = bear_scenario();
    s.agents.push_back(sim::AnimalAgent{"moose", {0, 0}, {1, 0}, 0.0});
    EXPECT_THROW(sim::validate(s), fg::ConfigError);
    EXPECT_THROW(sim::make_agent("moose", {0, 0}, {1, 0}, 0.0, sim::SpeciesTable::defaults()), fg::ConfigError);
}

TEST(Scenario, JsonErrors) {
    EXPECT_THROW(sim::scenario_from_json(nlohmann::json::array()), fg::ConfigError);
    EXPECT_THROW(sim::scenario_from_json({{"field", {{"width_m", 10}}}}), fg::ConfigError);
    EXPECT_THROW(sim::load_scenario("/no/such/scenario.json"), fg::ConfigError);
}

TEST(FovEntry, BisectsToBoundary) {
    const auto layout = sim::make_corner_layout(100, 60, prototype(), 1);
    const auto agent = sim::make_agent("bear", {-30, 27}, {1, 0}, 0.0, sim::SpeciesTable::defaults());
    const auto t = sim::fov_entry_time(layout, agent, 90.0);
    ASSERT_TRUE(t.has_value());
    // Camera c2 at (100, 0) looks toward (-1, 1) and reaches past the left
    // edge; its 120 m circle crosses y = 27 before the field boundary does.
    const double x_entry = 100.0 - std::sqrt(120.0 * 120.0 - 27.0 * 27.0);
    EXPECT_NEAR(*t, (x_entry + 30.0) / 1.7, 1e-6);
    const auto away = sim::make_agent("bear", {-30, 27}, {-1, 0}, 0.0, sim::SpeciesTable::defaults());
    EXPECT_FALSE(sim::fov_entry_time(layout, away, 90.0).has_value());
}

TEST(RunScenario, BearGetsTheNearestSpeaker) {
    sim::ScenarioMetrics m;
    run_to_text(bear_scenario(), &m);
    ASSERT_GT(m.commands, 0u);
    EXPECT_EQ(m.correct_speaker_rate, 1.0);
    EXPECT_EQ(m.missed_agents, 0u);
    ASSERT_TRUE(m.worst_case_lag_s.has_value());
    EXPECT_LE(*m.worst_case_lag_s, 1.5);
    EXPECT_GE(*m.worst_case_lag_s, 0.0);
    // Bear walks along y = 27 past speakers at x = 20, 40, 60, 80.
    EXPECT_EQ(m.selected_speaker_ids.front(), 1u);
    EXPECT_EQ(m.selected_speaker_ids.back(), 4u);
}

TEST(RunScenario, Deterministic) {
    auto s = bear_scenario();
    s.noise = {sim::NoiseModel::Kind::uniform, 1.0, 0.9, 1.1};
    EXPECT_EQ(run_to_text(s), run_to_text(s));
    auto other = s;
    other.seed = s.seed + 1;
    sim::ScenarioMetrics a, b;
    run_to_text(s, &a);
    run_to_text(other, &b);
    EXPECT_EQ(a.commands, b.commands);
}

TEST(RunScenario, FixedNoiseKeepsSpeakerChoice) {
    sim::ScenarioMetrics clean, noisy;
    run_to_text(bear_scenario(), &clean);
    auto s = bear_scenario();
    s.noise = {sim::NoiseModel::Kind::fixed, 1.177, 1.0, 1.0};
    run_to_text(s, &noisy);
    EXPECT_EQ(noisy.selected_speaker_ids, clean.selected_speaker_ids);
    EXPECT_EQ(noisy.correct_speaker_rate, 1.0);
}

TEST(RunScenario, UniformNoiseKeepsSpeakerChoice) {
    // Jitter stays inside the 50 px track radius here; wider bands let stale
    // duplicate tracks win while still fresh.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto s = bear_scenario();
        s.seed = seed;
        s.noise = {sim::NoiseModel::Kind::uniform, 1.0, 0.99, 1.01};
        sim::ScenarioMetrics m;
        run_to_text(s, &m);
        ASSERT_GT(m.commands, 0u);
        EXPECT_EQ(m.correct_speaker_rate, 1.0) << "seed " << seed;
    }
}

TEST(RunScenario, LagBoundOverEntryPhase) {
    for (int i = 0; i < 15; ++i) {
        auto s = bear_scenario();
        const double phase = 0.1 * i;
        s.agents[0] = sim::make_agent("bear", {-30, 27}, {1, 0}, phase, s.species);
        sim::ScenarioMetrics m;
        run_to_text(s, &m);
        ASSERT_TRUE(m.worst_case_lag_s.has_value()) << phase;
        EXPECT_LE(*m.worst_case_lag_s, 1.5 + s.tick_s) << phase;
        EXPECT_LE(*m.worst_case_lag_s, s.tick_s + 1e-9) << phase;
    }
}

TEST(RunScenario, StreamReplaysThroughWire) {
    std::ostringstream sink;
    fg::EventLog log(sink);
    const auto run = sim::run_scenario(bear_scenario(), log);
    ASSERT_EQ(run.stream.size(), 61u * 4u);
    for (std::size_t i = 0; i < 8; ++i) {
        const auto back = fg::parse_frame_line(fg::serialize_frame(run.stream[i]));
        EXPECT_EQ(back.camera_id, run.stream[i].camera_id);
        EXPECT_EQ(back.detections.size(), run.stream[i].detections.size());
    }
}
