#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace fieldguard {

enum class EventKind { frame_received, threat_detected, speaker_command, alert };

std::string_view to_string(EventKind kind);
/// Throws ProtocolError for an unknown name.
EventKind event_kind_from_string(std::string_view name);

struct EventRecord {
    EventKind kind = EventKind::frame_received;
    std::int64_t timestamp_ms = 0;
    std::string camera_id;
    nlohmann::json payload = nlohmann::json::object();

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// {"kind":...,"timestamp_ms":...,"camera_id":...,"payload":{...}}
std::string serialize_event(const EventRecord& record);
EventRecord parse_event_line(std::string_view line);

/// Append-only JSON-lines writer. Every append writes one whole line and
/// flushes before returning; failures throw LogError. Appends are serialized.
class EventLog {
public:
    enum class OpenMode { truncate, append };

    EventLog(const std::filesystem::path& path, OpenMode mode);
    /// Writes to a caller-owned stream (tests, stdout).
    explicit EventLog(std::ostream& sink);

    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    void append(const EventRecord& record);

    std::uint64_t records_written() const;

private:
    std::ofstream file_;
    std::ostream* sink_;
    std::uint64_t written_ = 0;
    mutable std::mutex mutex_;
};

}  // namespace fieldguard
