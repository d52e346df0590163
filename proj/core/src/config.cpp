#include "fieldguard/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fieldguard/errors.hpp"

namespace fieldguard {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(where + ": missing '" + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        fail(where + ": '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get_as<T>(obj, key, where);
}

Vec2 get_vec2(const json& obj, const char* key, const std::string& where) {
    const auto arr = get_as<std::vector<double>>(obj, key, where);
    if (arr.size() != 2) {
        fail(where + ": '" + key + "' must be a two-element array");
    }
    return {arr[0], arr[1]};
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        const bool ok = std::any_of(known.begin(), known.end(),
                                    [&](const char* k) { return item.key() == k; });
        if (!ok) {
            fail(where + ": unknown key '" + item.key() + "'");
        }
    }
}

CameraConfig camera_from_json(const json& j, std::size_t index) {
    const std::string where = "cameras[" + std::to_string(index) + "]";
    if (!j.is_object()) {
        fail(where + ": must be an object");
    }
    reject_unknown_keys(j,
                        {"camera_id", "focal_length_mm", "pixel_pitch_um", "range_m",
                         "image_width", "image_height", "pose"},
                        where);
    try {
        CameraIntrinsics intrinsics(get_as<std::string>(j, "camera_id", where),
                                    get_as<double>(j, "focal_length_mm", where),
                                    get_as<double>(j, "pixel_pitch_um", where),
                                    get_as<double>(j, "range_m", where),
                                    get_as<int>(j, "image_width", where),
                                    get_as<int>(j, "image_height", where));
        if (intrinsics.camera_id().empty()) {
            fail(where + ": camera_id must not be empty");
        }
        if (!j.contains("pose")) {
            CameraPose pose({0.0, 0.0}, {1.0, 0.0}, sensor_angle_of_view(intrinsics));
            return CameraConfig{std::move(intrinsics), pose};
        }
        const json& p = j.at("pose");
        const std::string pwhere = where + ".pose";
        if (!p.is_object()) {
            fail(pwhere + ": must be an object");
        }
        reject_unknown_keys(p, {"position", "boresight", "angle_of_view_deg"}, pwhere);
        const double aov = p.contains("angle_of_view_deg")
                               ? degrees_to_radians(get_as<double>(p, "angle_of_view_deg", pwhere))
                               : sensor_angle_of_view(intrinsics);
        CameraPose pose(p.contains("position") ? get_vec2(p, "position", pwhere) : Vec2{},
                        p.contains("boresight") ? get_vec2(p, "boresight", pwhere) : Vec2{1.0, 0.0},
                        aov);
        return CameraConfig{std::move(intrinsics), pose};
    } catch (const DomainError& e) {
        fail(where + ": " + e.what());
    }
}

SpeakerConfig speaker_from_json(const json& j, std::size_t index) {
    const std::string where = "speakers[" + std::to_string(index) + "]";
    if (!j.is_object()) {
        fail(where + ": must be an object");
    }
    reject_unknown_keys(j, {"id", "world", "camera_id", "pixel"}, where);
    SpeakerConfig s;
    s.id = get_as<std::uint32_t>(j, "id", where);
    if (j.contains("world")) {
        s.world_position = get_vec2(j, "world", where);
    }
    if (j.contains("camera_id")) {
        s.camera_id = get_as<std::string>(j, "camera_id", where);
    }
    if (j.contains("pixel")) {
        s.expected_pixel = get_vec2(j, "pixel", where);
    }
    if (s.expected_pixel.has_value() != s.camera_id.has_value()) {
        fail(where + ": 'pixel' and 'camera_id' must be given together");
    }
    return s;
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }

}  // namespace

const CameraConfig* SystemConfig::find_camera(std::string_view camera_id) const {
    const auto it = std::find_if(cameras.begin(), cameras.end(), [&](const CameraConfig& c) {
        return c.intrinsics.camera_id() == camera_id;
    });
    return it == cameras.end() ? nullptr : &*it;
}

void validate(const SystemConfig& config) {
    if (config.cameras.empty()) {
        fail("at least one camera is required");
    }
    if (config.cameras.size() > kMaxCameras) {
        fail("too many cameras: " + std::to_string(config.cameras.size()) +
             " configured, the multiplexer supports at most " + std::to_string(kMaxCameras));
    }
    std::set<std::string> ids;
    for (const auto& c : config.cameras) {
        if (!ids.insert(c.intrinsics.camera_id()).second) {
            fail("duplicate camera_id '" + c.intrinsics.camera_id() + "'");
        }
    }
    if (!std::isfinite(config.frame_interval_s) || config.frame_interval_s <= 0.0) {
        fail("frame_interval_s must be positive");
    }
    if (config.frame_interval_s > kMaxFrameIntervalS) {
        std::ostringstream msg;
        msg << "frame_interval_s " << config.frame_interval_s << " exceeds the " << kMaxFrameIntervalS
            << " s upper bound between processed frames";
        fail(msg.str());
    }
    if (config.ttl_frames < 1) {
        fail("ttl_frames must be at least 1");
    }
    const auto in_unit = [](double t) { return t >= 0.0 && t <= 1.0; };
    if (!in_unit(config.nms.iou_threshold) || !in_unit(config.nms.confidence_threshold)) {
        fail("nms thresholds must lie in [0, 1]");
    }
    std::set<std::pair<std::string, std::uint32_t>> pinned;
    for (const auto& s : config.speakers) {
        if (!s.camera_id) {
            continue;
        }
        if (!ids.contains(*s.camera_id)) {
            fail("speaker " + std::to_string(s.id) + " references unknown camera '" +
                 *s.camera_id + "'");
        }
        if (!pinned.emplace(*s.camera_id, s.id).second) {
            fail("speaker id " + std::to_string(s.id) + " repeated for camera '" + *s.camera_id + "'");
        }
    }
}

std::vector<std::string> placement_warnings(const SystemConfig& config) {
    std::vector<std::string> warnings;
    for (const auto& c : config.cameras) {
        const double deg = radians_to_degrees(c.pose.angle_of_view_rad());
        if (deg > 90.0 + 1e-9) {
            std::ostringstream msg;
            msg << "camera '" << c.intrinsics.camera_id() << "' has a " << deg
                << " degree angle of view; a corner camera covers exactly its two adjacent edges "
                   "only up to 90 degrees";
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

SystemConfig config_from_json(const json& doc) {
    if (!doc.is_object()) {
        fail("config: top level must be an object");
    }
    reject_unknown_keys(doc,
                        {"cameras", "speakers", "threat_classes", "speaker_class", "nms",
                         "frame_interval_s", "ttl_frames", "log_path"},
                        "config");
    SystemConfig config;
    const auto cams = doc.find("cameras");
    if (cams == doc.end() || !cams->is_array()) {
        fail("config: 'cameras' must be an array");
    }
    for (std::size_t i = 0; i < cams->size(); ++i) {
        config.cameras.push_back(camera_from_json((*cams)[i], i));
    }
    if (const auto sp = doc.find("speakers"); sp != doc.end()) {
        if (!sp->is_array()) {
            fail("config: 'speakers' must be an array");
        }
        for (std::size_t i = 0; i < sp->size(); ++i) {
            config.speakers.push_back(speaker_from_json((*sp)[i], i));
        }
    }
    if (doc.contains("threat_classes") || doc.contains("speaker_class")) {
        const ThreatPolicy d = ThreatPolicy::defaults();
        config.policy = ThreatPolicy(
            get_or<std::set<std::string>>(doc, "threat_classes", d.threat_classes(), "config"),
            get_or<std::string>(doc, "speaker_class", d.speaker_class(), "config"));
    }
    if (const auto n = doc.find("nms"); n != doc.end()) {
        if (!n->is_object()) {
            fail("config: 'nms' must be an object");
        }
        reject_unknown_keys(*n, {"confidence_threshold", "iou_threshold"}, "nms");
        config.nms.confidence_threshold =
            get_or<double>(*n, "confidence_threshold", config.nms.confidence_threshold, "nms");
        config.nms.iou_threshold = get_or<double>(*n, "iou_threshold", config.nms.iou_threshold, "nms");
    }
    config.frame_interval_s = get_or<double>(doc, "frame_interval_s", config.frame_interval_s, "config");
    const auto ttl = get_or<std::int64_t>(doc, "ttl_frames", config.ttl_frames, "config");
    if (ttl < 1 || ttl > std::numeric_limits<std::uint32_t>::max()) {
        fail("ttl_frames must be at least 1");
    }
    config.ttl_frames = static_cast<std::uint32_t>(ttl);
    config.log_path = get_or<std::string>(doc, "log_path", config.log_path.string(), "config");
    validate(config);
    return config;
}

nlohmann::ordered_json config_to_json(const SystemConfig& config) {
    nlohmann::ordered_json doc;
    auto cams = nlohmann::ordered_json::array();
    for (const auto& c : config.cameras) {
        nlohmann::ordered_json cam;
        cam["camera_id"] = c.intrinsics.camera_id();
        cam["focal_length_mm"] = c.intrinsics.focal_length_mm();
        cam["pixel_pitch_um"] = c.intrinsics.pixel_pitch_um();
        cam["range_m"] = c.intrinsics.range_m();
        cam["image_width"] = c.intrinsics.image_width();
        cam["image_height"] = c.intrinsics.image_height();
        cam["pose"] = {{"position", vec2_json(c.pose.position())},
                       {"boresight", vec2_json(c.pose.boresight())},
                       {"angle_of_view_deg", radians_to_degrees(c.pose.angle_of_view_rad())}};
        cams.push_back(std::move(cam));
    }
    doc["cameras"] = std::move(cams);
    auto speakers = nlohmann::ordered_json::array();
    for (const auto& s : config.speakers) {
        nlohmann::ordered_json sp;
        sp["id"] = s.id;
        if (s.world_position) {
            sp["world"] = vec2_json(*s.world_position);
        }
        if (s.camera_id) {
            sp["camera_id"] = *s.camera_id;
            sp["pixel"] = vec2_json(*s.expected_pixel);
        }
        speakers.push_back(std::move(sp));
    }
    doc["speakers"] = std::move(speakers);
    doc["threat_classes"] = config.policy.threat_classes();
    doc["speaker_class"] = config.policy.speaker_class();
    doc["nms"] = {{"confidence_threshold", config.nms.confidence_threshold},
                  {"iou_threshold", config.nms.iou_threshold}};
    doc["frame_interval_s"] = config.frame_interval_s;
    doc["ttl_frames"] = config.ttl_frames;
    doc["log_path"] = config.log_path.string();
    return doc;
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail("cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

SystemConfig default_config() {
    SystemConfig config;
    CameraIntrinsics intrinsics("c1", 4.0, 4.0, 120.0, 1920, 1080);
    config.cameras.push_back(
        CameraConfig{intrinsics, CameraPose({0.0, 0.0}, {1.0, 1.0}, kPi / 2.0)});
    return config;
}

}  // namespace fieldguard
