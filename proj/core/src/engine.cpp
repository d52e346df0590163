#include "fieldguard/engine.hpp"

#include <chrono>
#include <string>

#include "fieldguard/errors.hpp"
#include "fieldguard/scheduler.hpp"
#include "fieldguard/wire.hpp"

namespace fieldguard {
namespace {

// Nominal size for speakers pinned from configuration; only the center is
// used for matching.
constexpr double kPinnedBoxPx = 16.0;

nlohmann::json bbox_json(const BBox& b) {
    return {{"cx", b.cx()}, {"cy", b.cy()}, {"w", b.w()}, {"h", b.h()}};
}

}  // namespace

Engine::Engine(SystemConfig config, EventLog& log, ClockMode clock)
    : config_(std::move(config)), log_(log), clock_(clock) {
    validate(config_);
    params_.nms = config_.nms;
    params_.ttl_frames = config_.ttl_frames;
    for (const auto& cam : config_.cameras) {
        cameras_.emplace(cam.intrinsics.camera_id(),
                         CameraState{RangingModel(cam.intrinsics),
                                     SpeakerRegistry(cam.intrinsics.camera_id())});
    }
    for (const auto& s : config_.speakers) {
        if (s.camera_id && s.expected_pixel) {
            cameras_.find(*s.camera_id)
                ->second.registry.pin(
                    s.id, BBox(s.expected_pixel->x, s.expected_pixel->y, kPinnedBoxPx, kPinnedBoxPx));
        }
    }
}

Engine::CameraState& Engine::state_for(std::string_view camera_id, std::size_t byte_offset) {
    const auto it = cameras_.find(camera_id);
    if (it == cameras_.end()) {
        throw ProtocolError("frame from unconfigured camera '" + std::string(camera_id) + "'",
                            byte_offset);
    }
    return it->second;
}

const SpeakerRegistry& Engine::registry(std::string_view camera_id) const {
    const auto it = cameras_.find(camera_id);
    if (it == cameras_.end()) {
        throw ProtocolError("unknown camera '" + std::string(camera_id) + "'", 0);
    }
    return it->second.registry;
}

const RangingModel& Engine::model(std::string_view camera_id) const {
    const auto it = cameras_.find(camera_id);
    if (it == cameras_.end()) {
        throw ProtocolError("unknown camera '" + std::string(camera_id) + "'", 0);
    }
    return it->second.model;
}

std::int64_t Engine::now_ms(const DetectionFrame& frame) const {
    if (clock_ == ClockMode::replay) {
        return frame.timestamp_ms;
    }
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

FrameOutcome Engine::handle(const DetectionFrame& frame) {
    CameraState& state = state_for(frame.camera_id, 0);
    const std::int64_t ts = now_ms(frame);

    log_.append(EventRecord{EventKind::frame_received, ts, frame.camera_id,
                            {{"frame_index", frame.frame_index},
                             {"detections", frame.detections.size()}}});

    FrameOutcome outcome = process_frame(frame, config_.policy, state.registry, state.model, params_);

    for (const auto& t : outcome.threats) {
        log_.append(EventRecord{EventKind::threat_detected, ts, frame.camera_id,
                                {{"frame_index", frame.frame_index},
                                 {"class", t.class_label()},
                                 {"confidence", t.confidence()},
                                 {"bbox", bbox_json(t.bbox())}}});
    }
    for (auto& c : outcome.commands) {
        c.timestamp_ms = ts;
        log_.append(EventRecord{EventKind::speaker_command, ts, frame.camera_id,
                                {{"frame_index", c.frame_index},
                                 {"speaker_id", c.speaker_id},
                                 {"animal_class", c.animal_class},
                                 {"confidence", c.animal_confidence},
                                 {"animal_bbox", bbox_json(c.animal_bbox)},
                                 {"estimated_distance_m", c.estimated_distance_m}}});
    }
    for (auto& a : outcome.alerts) {
        a.timestamp_ms = ts;
        log_.append(EventRecord{EventKind::alert, ts, frame.camera_id,
                                {{"frame_index", a.frame_index},
                                 {"animal_class", a.animal_class},
                                 {"reason", to_string(a.reason)}}});
    }
    return outcome;
}

RunStats replay_stream(const SystemConfig& config, std::istream& input, EventLog& log) {
    std::vector<std::string> ids;
    for (const auto& c : config.cameras) {
        ids.push_back(c.intrinsics.camera_id());
    }
    FrameMultiplexer mux(ids);
    FrameReader reader;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            mux.push(reader.read(line));
        } catch (const ProtocolError& e) {
            throw ProtocolError("line " + std::to_string(line_no) + ": " + e.what(), e.byte_offset());
        }
    }
    mux.close();

    Engine engine(config, log, ClockMode::replay);
    RunStats stats;
    while (auto frame = mux.try_next()) {
        const FrameOutcome out = engine.handle(*frame);
        ++stats.frames;
        stats.commands += out.commands.size();
        stats.alerts += out.alerts.size();
    }
    return stats;
}

}  // namespace fieldguard
