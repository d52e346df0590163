#include "fieldguard/wire.hpp"

#include <string>

#include <nlohmann/json.hpp>

#include "fieldguard/errors.hpp"

namespace fieldguard {

SequencingError::SequencingError(std::string camera_id, std::uint64_t previous,
                                 std::uint64_t received)
    : std::runtime_error("camera '" + camera_id + "': frame_index " + std::to_string(received) +
                         " does not follow " + std::to_string(previous)),
      camera_id_(std::move(camera_id)),
      previous_(previous),
      received_(received) {}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
    throw ProtocolError("invalid frame: " + what, 0);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        schema_error(where + "missing field '" + key + "'");
    }
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) {
        schema_error(where + "field '" + key + "' must be a number");
    }
    return v.get<double>();
}

Detection parse_detection(const json& d, std::size_t index) {
    const std::string where = "detections[" + std::to_string(index) + "]: ";
    if (!d.is_object()) {
        schema_error(where + "must be an object");
    }
    const json& label = require(d, "class", where);
    if (!label.is_string()) {
        schema_error(where + "field 'class' must be a string");
    }
    const double confidence = require_number(d, "confidence", where);
    const json& box = require(d, "bbox", where);
    if (!box.is_object()) {
        schema_error(where + "field 'bbox' must be an object");
    }
    try {
        return Detection(BBox(require_number(box, "cx", where), require_number(box, "cy", where),
                              require_number(box, "w", where), require_number(box, "h", where)),
                         label.get<std::string>(), confidence);
    } catch (const DomainError& e) {
        schema_error(where + e.what());
    }
}

}  // namespace

DetectionFrame parse_frame_line(std::string_view line) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) {
        schema_error("top level must be an object");
    }

    DetectionFrame frame;
    const json& camera = require(doc, "camera_id", "");
    if (!camera.is_string() || camera.get_ref<const std::string&>().empty()) {
        schema_error("'camera_id' must be a non-empty string");
    }
    frame.camera_id = camera.get<std::string>();

    const json& index = require(doc, "frame_index", "");
    if (!index.is_number_unsigned()) {
        schema_error("'frame_index' must be a non-negative integer");
    }
    frame.frame_index = index.get<std::uint64_t>();

    const json& ts = require(doc, "timestamp_ms", "");
    if (!ts.is_number_integer()) {
        schema_error("'timestamp_ms' must be an integer");
    }
    frame.timestamp_ms = ts.get<std::int64_t>();

    const json& dets = require(doc, "detections", "");
    if (!dets.is_array()) {
        schema_error("'detections' must be an array");
    }
    frame.detections.reserve(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        frame.detections.push_back(parse_detection(dets[i], i));
    }
    return frame;
}

std::string serialize_frame(const DetectionFrame& frame) {
    nlohmann::ordered_json doc;
    doc["camera_id"] = frame.camera_id;
    doc["frame_index"] = frame.frame_index;
    doc["timestamp_ms"] = frame.timestamp_ms;
    auto dets = nlohmann::ordered_json::array();
    for (const auto& d : frame.detections) {
        nlohmann::ordered_json item;
        item["class"] = d.class_label();
        item["confidence"] = d.confidence();
        item["bbox"] = {{"cx", d.bbox().cx()}, {"cy", d.bbox().cy()},
                        {"w", d.bbox().w()},   {"h", d.bbox().h()}};
        dets.push_back(std::move(item));
    }
    doc["detections"] = std::move(dets);
    return doc.dump();
}

void FrameSequencer::accept(const DetectionFrame& frame) {
    const auto it = last_.find(frame.camera_id);
    if (it == last_.end()) {
        last_.emplace(frame.camera_id, frame.frame_index);
        return;
    }
    if (frame.frame_index <= it->second) {
        throw SequencingError(frame.camera_id, it->second, frame.frame_index);
    }
    it->second = frame.frame_index;
}

std::optional<std::uint64_t> FrameSequencer::last_index(const std::string& camera_id) const {
    const auto it = last_.find(camera_id);
    if (it == last_.end()) {
        return std::nullopt;
    }
    return it->second;
}

DetectionFrame FrameReader::read(std::string_view line) {
    DetectionFrame frame = parse_frame_line(line);
    sequencer_.accept(frame);
    return frame;
}

}  // namespace fieldguard
