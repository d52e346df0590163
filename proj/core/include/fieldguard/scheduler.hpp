#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldguard/detections.hpp"

namespace fieldguard {

/// Cyclic dispatch order over `camera_ids` for `ticks` slots. Throws
/// ConfigError for an empty list or more than 32 cameras.
std::vector<std::string> round_robin_schedule(std::span<const std::string> camera_ids,
                                              std::size_t ticks);

/// Logical N-to-1 video multiplexer. Producers push frames per camera; the
/// consumer pops them in round-robin slot order, skipping cameras with
/// nothing queued. Within a camera, arrival order is kept.
class FrameMultiplexer {
public:
    explicit FrameMultiplexer(std::vector<std::string> camera_ids);

    /// Thread-safe. Throws ProtocolError for a camera not in the schedule.
    void push(DetectionFrame frame);

    /// Non-blocking pop.
    std::optional<DetectionFrame> try_next();

    /// Blocks until a frame is available or the multiplexer is closed and drained.
    std::optional<DetectionFrame> wait_next();

    /// No further pushes; wakes waiting consumers.
    void close();

    std::size_t pending() const;

private:
    std::optional<DetectionFrame> pop_locked();

    std::vector<std::string> camera_ids_;
    std::vector<std::deque<DetectionFrame>> queues_;
    std::size_t cursor_ = 0;
    std::size_t pending_ = 0;
    bool closed_ = false;
    mutable std::mutex mutex_;
    std::condition_variable ready_;
};

}  // namespace fieldguard
