#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <string>

#include "fieldguard/config.hpp"
#include "fieldguard/decision.hpp"
#include "fieldguard/event_log.hpp"
#include "fieldguard/ranging.hpp"

namespace fieldguard {

enum class ClockMode {
    /// Event timestamps come from the host clock.
    live,
    /// Event timestamps come from the frame, so reruns are byte-identical.
    replay,
};

/// Per-camera decision state plus the event log. Frames for one camera
/// must be handed over in order; the engine itself is not thread-safe.
class Engine {
public:
    Engine(SystemConfig config, EventLog& log, ClockMode clock);

    /// Runs the decision pipeline on one frame and logs frame_received,
    /// threat_detected, speaker_command and alert records for it.
    /// Throws ProtocolError for a camera missing from the configuration.
    FrameOutcome handle(const DetectionFrame& frame);

    const SystemConfig& config() const noexcept { return config_; }
    const SpeakerRegistry& registry(std::string_view camera_id) const;
    const RangingModel& model(std::string_view camera_id) const;

private:
    struct CameraState {
        RangingModel model;
        SpeakerRegistry registry;
    };

    CameraState& state_for(std::string_view camera_id, std::size_t byte_offset);
    std::int64_t now_ms(const DetectionFrame& frame) const;

    SystemConfig config_;
    EventLog& log_;
    ClockMode clock_;
    DecisionParams params_;
    std::map<std::string, CameraState, std::less<>> cameras_;
};

struct RunStats {
    std::uint64_t frames = 0;
    std::uint64_t commands = 0;
    std::uint64_t alerts = 0;
};

/// Reads every line of `input` (blank lines skipped), enforces per-camera
/// ordering, merges cameras through the round-robin multiplexer and
/// processes the result with frame timestamps. Protocol errors carry the
/// 1-based line number in their message.
RunStats replay_stream(const SystemConfig& config, std::istream& input, EventLog& log);

}  // namespace fieldguard
