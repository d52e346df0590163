#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fieldguard/decision.hpp"
#include "fieldguard/optics.hpp"

namespace fieldguard {

inline constexpr std::size_t kMaxCameras = 32;
inline constexpr double kMaxFrameIntervalS = 1.5;

struct CameraConfig {
    CameraIntrinsics intrinsics;
    CameraPose pose;
};

/// A speaker known ahead of time: its integer id, optionally where it sits
/// in the world and/or where a given camera expects to see it.
struct SpeakerConfig {
    std::uint32_t id = 0;
    std::optional<Vec2> world_position;
    std::optional<std::string> camera_id;
    std::optional<Vec2> expected_pixel;
};

struct SystemConfig {
    std::vector<CameraConfig> cameras;
    std::vector<SpeakerConfig> speakers;
    ThreatPolicy policy = ThreatPolicy::defaults();
    NmsParams nms;
    double frame_interval_s = kMaxFrameIntervalS;
    std::uint32_t ttl_frames = kDefaultTtlFrames;
    std::filesystem::path log_path = "events.jsonl";

    const CameraConfig* find_camera(std::string_view camera_id) const;
};

/// Throws ConfigError on any violated invariant: camera count outside
/// [1, 32], duplicate camera ids, frame interval outside (0, 1.5],
/// ttl_frames < 1, NMS thresholds outside [0, 1], or speaker entries that
/// reference unknown cameras or reuse an id within one camera.
void validate(const SystemConfig& config);

/// Non-fatal findings. Currently: cameras wider than 90 degrees, which no
/// longer cover exactly two adjacent field edges from a corner.
std::vector<std::string> placement_warnings(const SystemConfig& config);

SystemConfig config_from_json(const nlohmann::json& doc);
/// Every field spelled out, in a stable key order.
nlohmann::ordered_json config_to_json(const SystemConfig& config);

/// Reads, parses and validates a config file. Errors are ConfigError.
SystemConfig load_config(const std::filesystem::path& path);

/// A single-camera config with every default spelled out.
SystemConfig default_config();

}  // namespace fieldguard
