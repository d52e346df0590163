#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fieldguard/config.hpp"
#include "fieldguard/detections.hpp"
#include "fieldguard/event_log.hpp"
#include "fieldguard/geometry.hpp"
#include "fieldguard/optics.hpp"

namespace fieldguard::sim {

struct SpeakerSite {
    std::uint32_t id = 0;
    Vec2 position;
};

struct FieldCamera {
    CameraIntrinsics intrinsics;
    CameraPose pose;
};

/// Rectangle [0, width] x [0, height] seen from above.
struct FieldLayout {
    double width_m = 0.0;
    double height_m = 0.0;
    std::vector<FieldCamera> cameras;
    std::vector<SpeakerSite> speakers;

    bool contains(Vec2 p) const;
};

/// Throws ConfigError: non-positive size, no cameras, speakers outside the
/// field, duplicate speaker ids.
void validate(const FieldLayout& layout);

/// Four cameras on the corners, each looking along its corner bisector with
/// the given angle of view, plus `speaker_count` speakers evenly spaced on
/// the horizontal midline. Camera ids are `<prefix>1`..`<prefix>4`
/// counter-clockwise from the origin; speaker ids start at 1.
FieldLayout make_corner_layout(double width_m, double height_m, const CameraIntrinsics& prototype,
                               std::size_t speaker_count, double angle_of_view_rad = kPi / 2.0);

/// Walking speeds in m/s. Only the bear has a built-in value (1.7 m/s).
class SpeciesTable {
public:
    static SpeciesTable defaults();

    void set(std::string species, double speed_mps);
    /// Throws ConfigError for an unknown species.
    double speed(const std::string& species) const;
    const std::map<std::string, double>& speeds() const noexcept { return speeds_; }

private:
    std::map<std::string, double> speeds_;
};

/// Constant-velocity point animal that appears at `entry_time_s`.
struct AnimalAgent {
    std::string species;
    Vec2 start;
    Vec2 velocity;
    double entry_time_s = 0.0;
};

/// Velocity is the species speed along `heading` (normalized here).
AnimalAgent make_agent(std::string species, Vec2 start, Vec2 heading, double entry_time_s,
                       const SpeciesTable& table);

/// Per-frame multiplicative error applied to ground distances.
struct NoiseModel {
    enum class Kind { none, fixed, uniform };
    Kind kind = Kind::none;
    double factor = 1.0;
    double low = 1.0;
    double high = 1.0;

    /// The factor a camera would be calibrated with: fixed factor, or the
    /// midpoint of the uniform band.
    double nominal() const;
};

struct Scenario {
    FieldLayout layout;
    std::vector<AnimalAgent> agents;
    SpeciesTable species = SpeciesTable::defaults();
    double duration_s = 60.0;
    double tick_s = 1.5;
    std::uint64_t seed = 0;
    NoiseModel noise;
    std::int64_t start_timestamp_ms = 1690000000000;
    double speaker_box_px = 24.0;
    std::map<std::string, std::pair<double, double>> animal_box_px;
};

/// Throws ConfigError: tick <= 0 or above the 1.5 s frame budget, duration
/// shorter than a tick, invalid layout, unknown species.
void validate(const Scenario& scenario);

struct AgentState {
    AnimalAgent agent;
    Vec2 position;
    bool active = false;
};

struct SimState {
    double time_s = 0.0;
    std::vector<AgentState> agents;
};

SimState initial_state(const Scenario& scenario);

/// Constant-velocity advance. Agents whose entry time falls inside the step
/// only move for the part of the step after they appear. Agents outside
/// every camera's view still move. Throws DomainError for dt <= 0.
SimState step(const SimState& state, double dt_s);

/// Where the linear ranging model puts a ground point in a camera image:
/// the boresight runs through the center column, the point at half range
/// lands on the center row, and one pixel covers range x IFOV meters.
/// `noise_factor` scales ground offsets from the camera before mapping.
Vec2 world_to_image(const FieldCamera& camera, Vec2 world, double noise_factor = 1.0);

/// Detections for every active agent and speaker inside the camera's view,
/// confidence 1.0, speakers first in id order then agents in scenario order.
DetectionFrame synthesize_frame(const Scenario& scenario, const SimState& state,
                                std::size_t camera_index, std::uint64_t frame_index,
                                double noise_factor = 1.0);

/// Engine configuration for a scenario: the layout's cameras, speakers
/// pinned at their expected pixel positions (at the nominal noise factor)
/// and frame interval = tick.
SystemConfig engine_config_for(const Scenario& scenario);

/// First time at or after entry when the agent is inside any camera's
/// view, searched up to `horizon_s`; resolution 1e-9 s.
std::optional<double> fov_entry_time(const FieldLayout& layout, const AnimalAgent& agent,
                                     double horizon_s);

struct AgentTiming {
    std::optional<double> fov_entry_s;
    std::optional<double> first_command_s;
};

struct ScenarioMetrics {
    std::optional<double> first_detection_s;
    std::optional<double> first_command_s;
    /// World speaker id named by each command, in emission order.
    std::vector<std::uint32_t> selected_speaker_ids;
    std::size_t commands = 0;
    std::size_t correct_commands = 0;
    std::size_t alerts = 0;
    /// Fraction of commands naming the ground-truth nearest visible speaker;
    /// 1.0 when there were no commands.
    double correct_speaker_rate = 1.0;
    /// Max over agents of first command time minus view entry time.
    std::optional<double> worst_case_lag_s;
    /// Agents that entered a view but never triggered a command.
    std::size_t missed_agents = 0;
    std::vector<AgentTiming> agents;
};

nlohmann::json metrics_to_json(const ScenarioMetrics& metrics);

struct ScenarioRun {
    ScenarioMetrics metrics;
    /// Every synthesized frame in processing order, replayable through
    /// replay_stream.
    std::vector<DetectionFrame> stream;
};

/// Steps the world at the scenario tick, synthesizes one frame per camera
/// per tick in round-robin order and feeds them through the engine with
/// frame timestamps, logging to `log`.
ScenarioRun run_scenario(const Scenario& scenario, EventLog& log);

Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace fieldguard::sim
