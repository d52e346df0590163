#include "fieldguard/decision.hpp"

#include <algorithm>
#include <tuple>

#include "fieldguard/errors.hpp"

namespace fieldguard {

ThreatPolicy::ThreatPolicy(std::set<std::string> threat_classes, std::string speaker_class)
    : threat_classes_(std::move(threat_classes)), speaker_class_(std::move(speaker_class)) {
    if (threat_classes_.empty()) {
        throw ConfigError("threat class set must not be empty");
    }
    if (speaker_class_.empty()) {
        throw ConfigError("speaker class must not be empty");
    }
    if (threat_classes_.contains(speaker_class_)) {
        throw ConfigError("speaker class '" + speaker_class_ + "' cannot also be a threat class");
    }
}

ThreatPolicy ThreatPolicy::defaults() {
    return ThreatPolicy({"horse", "sheep", "cow", "elephant", "bear", "pig", "boar", "bird"},
                        "speaker");
}

bool is_threat(const ThreatPolicy& policy, std::string_view class_label) {
    const auto& classes = policy.threat_classes();
    return classes.find(std::string(class_label)) != classes.end();
}

SpeakerRegistry::SpeakerRegistry(std::string camera_id) : camera_id_(std::move(camera_id)) {}

void SpeakerRegistry::pin(std::uint32_t speaker_id, BBox expected) {
    const auto it = std::lower_bound(
        tracks_.begin(), tracks_.end(), speaker_id,
        [](const SpeakerTrack& t, std::uint32_t id) { return t.speaker_id < id; });
    if (it != tracks_.end() && it->speaker_id == speaker_id) {
        throw ConfigError("speaker id " + std::to_string(speaker_id) +
                          " pinned twice for camera " + camera_id_);
    }
    tracks_.insert(it, SpeakerTrack{speaker_id, expected, std::nullopt, camera_id_});
}

std::vector<SpeakerTrack> SpeakerRegistry::fresh_tracks(std::uint64_t current_frame,
                                                        std::uint32_t ttl_frames) const {
    std::vector<SpeakerTrack> fresh;
    for (const auto& t : tracks_) {
        if (t.last_seen_frame && *t.last_seen_frame <= current_frame &&
            current_frame - *t.last_seen_frame <= ttl_frames) {
            fresh.push_back(t);
        }
    }
    return fresh;
}

void SpeakerRegistry::update(std::span<const Detection> detections, const ThreatPolicy& policy,
                             std::uint64_t frame_index) {
    std::vector<const Detection*> speakers;
    for (const auto& d : detections) {
        if (d.class_label() == policy.speaker_class()) {
            speakers.push_back(&d);
        }
    }
    if (speakers.empty()) {
        return;
    }

    // (distance, detection index, track index)
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t di = 0; di < speakers.size(); ++di) {
        for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
            const double d = center_distance_px(speakers[di]->bbox(), tracks_[ti].last_bbox);
            if (d <= kSpeakerMatchRadiusPx) {
                pairs.emplace_back(d, di, ti);
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<bool> det_used(speakers.size(), false);
    std::vector<bool> track_used(tracks_.size(), false);
    for (const auto& [d, di, ti] : pairs) {
        if (det_used[di] || track_used[ti]) {
            continue;
        }
        det_used[di] = true;
        track_used[ti] = true;
        tracks_[ti].last_bbox = speakers[di]->bbox();
        tracks_[ti].last_seen_frame = frame_index;
    }

    std::uint32_t next_id = tracks_.empty() ? 1 : tracks_.back().speaker_id + 1;
    for (std::size_t di = 0; di < speakers.size(); ++di) {
        if (!det_used[di]) {
            tracks_.push_back(SpeakerTrack{next_id++, speakers[di]->bbox(), frame_index, camera_id_});
        }
    }
}

void update_speaker_tracks(SpeakerRegistry& registry, const DetectionFrame& frame,
                           const ThreatPolicy& policy) {
    if (frame.camera_id != registry.camera_id()) {
        throw ProtocolError("frame from camera '" + frame.camera_id +
                                "' routed to registry of camera '" + registry.camera_id() + "'",
                            0);
    }
    registry.update(frame.detections, policy, frame.frame_index);
}

std::optional<SpeakerChoice> select_speaker(const Detection& animal,
                                            std::span<const SpeakerTrack> candidates,
                                            const RangingModel& model) {
    std::optional<SpeakerChoice> best;
    for (const auto& track : candidates) {
        const double px = center_distance_px(animal.bbox(), track.last_bbox);
        const double meters = actual_distance(model, px);
        if (!best || meters < best->estimated_distance_m ||
            (meters == best->estimated_distance_m && track.speaker_id < best->speaker_id)) {
            best = SpeakerChoice{track.speaker_id, meters};
        }
    }
    return best;
}

std::string_view to_string(AlertReason reason) {
    switch (reason) {
        case AlertReason::no_speaker_in_view:
            return "no_speaker_in_view";
        case AlertReason::stale_speakers:
            return "stale_speakers";
    }
    return "unknown";
}

FrameOutcome process_frame(const DetectionFrame& frame, const ThreatPolicy& policy,
                           SpeakerRegistry& registry, const RangingModel& model,
                           const DecisionParams& params) {
    if (params.ttl_frames < 1) {
        throw ConfigError("ttl_frames must be at least 1");
    }
    FrameOutcome out;
    const std::vector<Detection> kept = nms(frame.detections, params.nms);

    DetectionFrame filtered{frame.camera_id, frame.frame_index, frame.timestamp_ms, kept};
    update_speaker_tracks(registry, filtered, policy);
    const std::vector<SpeakerTrack> fresh = registry.fresh_tracks(frame.frame_index, params.ttl_frames);
    const bool any_seen = std::any_of(registry.tracks().begin(), registry.tracks().end(),
                                      [](const SpeakerTrack& t) { return t.last_seen_frame.has_value(); });

    for (const auto& d : kept) {
        if (!is_threat(policy, d.class_label())) {
            continue;
        }
        out.threats.push_back(d);
        if (const auto choice = select_speaker(d, fresh, model)) {
            out.commands.push_back(DeterrenceCommand{choice->speaker_id, frame.camera_id,
                                                     frame.frame_index, d.class_label(),
                                                     d.confidence(), d.bbox(),
                                                     choice->estimated_distance_m,
                                                     frame.timestamp_ms});
        } else {
            out.alerts.push_back(Alert{frame.camera_id, frame.frame_index, d.class_label(),
                                       any_seen ? AlertReason::stale_speakers
                                                : AlertReason::no_speaker_in_view,
                                       frame.timestamp_ms});
        }
    }
    return out;
}

}  // namespace fieldguard
