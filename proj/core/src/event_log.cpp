#include "fieldguard/event_log.hpp"

#include "fieldguard/errors.hpp"

namespace fieldguard {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::frame_received:
            return "frame_received";
        case EventKind::threat_detected:
            return "threat_detected";
        case EventKind::speaker_command:
            return "speaker_command";
        case EventKind::alert:
            return "alert";
    }
    return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
    for (const EventKind k : {EventKind::frame_received, EventKind::threat_detected,
                              EventKind::speaker_command, EventKind::alert}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ProtocolError("unknown event kind '" + std::string(name) + "'", 0);
}

std::string serialize_event(const EventRecord& record) {
    nlohmann::ordered_json doc;
    doc["kind"] = to_string(record.kind);
    doc["timestamp_ms"] = record.timestamp_ms;
    doc["camera_id"] = record.camera_id;
    doc["payload"] = nlohmann::ordered_json::parse(record.payload.dump());
    return doc.dump();
}

EventRecord parse_event_line(std::string_view line) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("malformed event: ") + e.what(), e.byte);
    }
    try {
        EventRecord r;
        r.kind = event_kind_from_string(doc.at("kind").get<std::string>());
        r.timestamp_ms = doc.at("timestamp_ms").get<std::int64_t>();
        r.camera_id = doc.at("camera_id").get<std::string>();
        r.payload = doc.at("payload");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed event: ") + e.what(), 0);
    }
}

EventLog::EventLog(const std::filesystem::path& path, OpenMode mode)
    : file_(path, mode == OpenMode::append ? std::ios::out | std::ios::app
                                           : std::ios::out | std::ios::trunc),
      sink_(&file_) {
    if (!file_) {
        throw LogError("cannot open event log " + path.string());
    }
}

EventLog::EventLog(std::ostream& sink) : sink_(&sink) {}

void EventLog::append(const EventRecord& record) {
    // Serialize before locking so a bad payload never leaves a partial line.
    std::string line = serialize_event(record);
    line.push_back('\n');
    std::lock_guard lock(mutex_);
    sink_->write(line.data(), static_cast<std::streamsize>(line.size()));
    sink_->flush();
    if (!*sink_) {
        throw LogError("event log write failed");
    }
    ++written_;
}

std::uint64_t EventLog::records_written() const {
    std::lock_guard lock(mutex_);
    return written_;
}

}  // namespace fieldguard
