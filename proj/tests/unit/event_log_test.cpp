#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fieldguard/errors.hpp"
#include "fieldguard/event_log.hpp"

namespace fg = fieldguard;

namespace {

fg::EventRecord command_record() {
    return {fg::EventKind::speaker_command, 1690000001500, "c1",
            {{"frame_index", 1}, {"speaker_id", 2}, {"estimated_distance_m", 6.0}}};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(EventLog, OneLinePerRecordInOrder) {
    std::ostringstream sink;
    fg::EventLog log(sink);
    log.append(command_record());
    log.append({fg::EventKind::alert, 1690000003000, "c2", {{"reason", "no_speaker_in_view"}}});
    EXPECT_EQ(log.records_written(), 2u);
    const auto lines = lines_of(sink.str());
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].rfind(R"({"kind":"speaker_command","timestamp_ms":1690000001500,"camera_id":"c1",)", 0), 0u);
    EXPECT_EQ(fg::parse_event_line(lines[1]).kind, fg::EventKind::alert);
    EXPECT_EQ(sink.str().back(), '\n');
}

TEST(EventLog, ReplayReproducesRecords) {
    std::ostringstream sink;
    fg::EventLog log(sink);
    const std::vector<fg::EventRecord> records{
        {fg::EventKind::frame_received, 1, "c1", {{"frame_index", 0}, {"detections", 3}}},
        {fg::EventKind::threat_detected, 1, "c1", {{"class", "bear"}, {"confidence", 0.25}}},
        command_record(),
        {fg::EventKind::alert, 9, "c3", {{"reason", "stale_speakers"}}},
    };
    for (const auto& r : records) log.append(r);
    const auto lines = lines_of(sink.str());
    ASSERT_EQ(lines.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(fg::parse_event_line(lines[i]), records[i]);
}

TEST(EventLog, FileModes) {
    const auto path = std::filesystem::temp_directory_path() / "fieldguard_event_log_test.jsonl";
    {
        fg::EventLog log(path, fg::EventLog::OpenMode::truncate);
        log.append(command_record());
    }
    {
        fg::EventLog log(path, fg::EventLog::OpenMode::append);
        log.append(command_record());
    }
    {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        EXPECT_EQ(lines_of(ss.str()).size(), 2u);
    }
    {
        fg::EventLog log(path, fg::EventLog::OpenMode::truncate);
    }
    EXPECT_EQ(std::filesystem::file_size(path), 0u);
    std::filesystem::remove(path);
}

TEST(EventLog, FailuresSurface) {
    EXPECT_THROW(fg::EventLog("/nonexistent-dir/x/events.jsonl", fg::EventLog::OpenMode::append), fg::LogError);
    std::ostringstream sink;
    sink.setstate(std::ios::badbit);
    fg::EventLog log(sink);
    EXPECT_THROW(log.append(command_record()), fg::LogError);
}

TEST(EventLog, ParseRejectsGarbage) {
    EXPECT_THROW(fg::parse_event_line("{"), fg::ProtocolError);
    EXPECT_THROW(fg::parse_event_line(R"({"kind":"explosion","timestamp_ms":0,"camera_id":"c","payload":{}})"),
                 fg::ProtocolError);
    EXPECT_THROW(fg::parse_event_line(R"({"kind":"alert","camera_id":"c","payload":{}})"), fg::ProtocolError);
}
