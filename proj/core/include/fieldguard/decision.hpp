#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldguard/detections.hpp"
#include "fieldguard/ranging.hpp"

namespace fieldguard {

/// Which class labels are animals worth deterring, and which label marks a
/// loudspeaker.
class ThreatPolicy {
public:
    /// Throws ConfigError if `threat_classes` is empty or contains
    /// `speaker_class`.
    ThreatPolicy(std::set<std::string> threat_classes, std::string speaker_class);

    /// horse, sheep, cow, elephant, bear, pig, boar and bird; speaker class
    /// "speaker".
    static ThreatPolicy defaults();

    const std::set<std::string>& threat_classes() const noexcept { return threat_classes_; }
    const std::string& speaker_class() const noexcept { return speaker_class_; }

private:
    std::set<std::string> threat_classes_;
    std::string speaker_class_;
};

/// Case-sensitive exact membership test.
bool is_threat(const ThreatPolicy& policy, std::string_view class_label);

struct SpeakerTrack {
    std::uint32_t speaker_id = 0;
    BBox last_bbox{0.0, 0.0, 1.0, 1.0};
    /// Empty for tracks pinned from configuration that have not been observed yet.
    std::optional<std::uint64_t> last_seen_frame;
    std::string camera_id;
};

inline constexpr double kSpeakerMatchRadiusPx = 50.0;
inline constexpr std::uint32_t kDefaultTtlFrames = 20;

/// Speakers seen by one camera. Owned by a single processing context.
class SpeakerRegistry {
public:
    explicit SpeakerRegistry(std::string camera_id);

    const std::string& camera_id() const noexcept { return camera_id_; }

    /// Registers a speaker with a known id at an expected pixel position.
    /// The track stays unusable until a detection refreshes it.
    /// Throws ConfigError on a duplicate id.
    void pin(std::uint32_t speaker_id, BBox expected);

    /// Ordered by speaker id.
    const std::vector<SpeakerTrack>& tracks() const noexcept { return tracks_; }

    /// Tracks seen within the last `ttl_frames` frames relative to `current_frame`.
    std::vector<SpeakerTrack> fresh_tracks(std::uint64_t current_frame, std::uint32_t ttl_frames) const;

    bool empty() const noexcept { return tracks_.empty(); }

    /// Folds the speaker detections of one frame into the registry. Pairs
    /// within kSpeakerMatchRadiusPx are matched greedily by ascending center
    /// distance; unmatched detections open a track with the next unused id.
    void update(std::span<const Detection> detections, const ThreatPolicy& policy,
                std::uint64_t frame_index);

private:
    std::string camera_id_;
    std::vector<SpeakerTrack> tracks_;
};

/// Free-function form of SpeakerRegistry::update for a whole frame.
void update_speaker_tracks(SpeakerRegistry& registry, const DetectionFrame& frame,
                           const ThreatPolicy& policy);

struct SpeakerChoice {
    std::uint32_t speaker_id = 0;
    double estimated_distance_m = 0.0;
};

/// Nearest speaker to `animal` by estimated ground distance; ties go to the
/// smallest id. Empty when `candidates` is empty.
std::optional<SpeakerChoice> select_speaker(const Detection& animal,
                                            std::span<const SpeakerTrack> candidates,
                                            const RangingModel& model);

struct DeterrenceCommand {
    std::uint32_t speaker_id = 0;
    std::string camera_id;
    std::uint64_t frame_index = 0;
    std::string animal_class;
    double animal_confidence = 0.0;
    BBox animal_bbox{0.0, 0.0, 1.0, 1.0};
    double estimated_distance_m = 0.0;
    std::int64_t timestamp_ms = 0;

    friend bool operator==(const DeterrenceCommand&, const DeterrenceCommand&) = default;
};

enum class AlertReason { no_speaker_in_view, stale_speakers };

std::string_view to_string(AlertReason reason);

struct Alert {
    std::string camera_id;
    std::uint64_t frame_index = 0;
    std::string animal_class;
    AlertReason reason = AlertReason::no_speaker_in_view;
    std::int64_t timestamp_ms = 0;

    friend bool operator==(const Alert&, const Alert&) = default;
};

struct DecisionParams {
    NmsParams nms;
    std::uint32_t ttl_frames = kDefaultTtlFrames;
};

struct FrameOutcome {
    /// Threat detections that survived NMS, by descending confidence.
    std::vector<Detection> threats;
    std::vector<DeterrenceCommand> commands;
    std::vector<Alert> alerts;
};

/// nms -> speaker track update -> one speaker selection per threat animal.
/// Commands come out in descending animal confidence.
FrameOutcome process_frame(const DetectionFrame& frame, const ThreatPolicy& policy,
                           SpeakerRegistry& registry, const RangingModel& model,
                           const DecisionParams& params);

}  // namespace fieldguard
