#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "fieldguard/detections.hpp"

namespace fieldguard {

// Line-delimited JSON, one frame per line:
// {"camera_id":"c1","frame_index":42,"timestamp_ms":1690000000000,
//  "detections":[{"class":"elephant","confidence":0.91,
//                 "bbox":{"cx":312.5,"cy":201.0,"w":180.0,"h":140.0}}]}
// Unknown fields are ignored.

/// Parses and validates one line. Throws ProtocolError (with the byte offset
/// of the failure) for malformed JSON, missing fields or invalid values.
DetectionFrame parse_frame_line(std::string_view line);

/// Compact single-line JSON without a trailing newline.
std::string serialize_frame(const DetectionFrame& frame);

/// Enforces strictly increasing frame_index per camera across a stream.
class FrameSequencer {
public:
    /// Throws SequencingError naming the camera and both indices.
    void accept(const DetectionFrame& frame);

    std::optional<std::uint64_t> last_index(const std::string& camera_id) const;

private:
    std::map<std::string, std::uint64_t, std::less<>> last_;
};

/// parse_frame_line followed by FrameSequencer::accept.
class FrameReader {
public:
    DetectionFrame read(std::string_view line);

private:
    FrameSequencer sequencer_;
};

}  // namespace fieldguard
