#include "fieldguard/scheduler.hpp"

#include <algorithm>

#include "fieldguard/config.hpp"
#include "fieldguard/errors.hpp"

namespace fieldguard {
namespace {

void check_camera_count(std::size_t n) {
    if (n == 0) {
        throw ConfigError("schedule needs at least one camera");
    }
    if (n > kMaxCameras) {
        throw ConfigError("schedule supports at most " + std::to_string(kMaxCameras) +
                          " cameras, got " + std::to_string(n));
    }
}

}  // namespace

std::vector<std::string> round_robin_schedule(std::span<const std::string> camera_ids,
                                              std::size_t ticks) {
    check_camera_count(camera_ids.size());
    std::vector<std::string> order;
    order.reserve(ticks);
    for (std::size_t t = 0; t < ticks; ++t) {
        order.push_back(camera_ids[t % camera_ids.size()]);
    }
    return order;
}

FrameMultiplexer::FrameMultiplexer(std::vector<std::string> camera_ids)
    : camera_ids_(std::move(camera_ids)), queues_(camera_ids_.size()) {
    check_camera_count(camera_ids_.size());
}

void FrameMultiplexer::push(DetectionFrame frame) {
    const auto it = std::find(camera_ids_.begin(), camera_ids_.end(), frame.camera_id);
    if (it == camera_ids_.end()) {
        throw ProtocolError("frame from unconfigured camera '" + frame.camera_id + "'", 0);
    }
    {
        std::lock_guard lock(mutex_);
        if (closed_) {
            throw ProtocolError("multiplexer is closed", 0);
        }
        queues_[static_cast<std::size_t>(it - camera_ids_.begin())].push_back(std::move(frame));
        ++pending_;
    }
    ready_.notify_one();
}

std::optional<DetectionFrame> FrameMultiplexer::pop_locked() {
    if (pending_ == 0) {
        return std::nullopt;
    }
    for (std::size_t n = 0; n < camera_ids_.size(); ++n) {
        auto& q = queues_[cursor_];
        cursor_ = (cursor_ + 1) % camera_ids_.size();
        if (!q.empty()) {
            DetectionFrame f = std::move(q.front());
            q.pop_front();
            --pending_;
            return f;
        }
    }
    return std::nullopt;
}

std::optional<DetectionFrame> FrameMultiplexer::try_next() {
    std::lock_guard lock(mutex_);
    return pop_locked();
}

std::optional<DetectionFrame> FrameMultiplexer::wait_next() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return pending_ > 0 || closed_; });
    return pop_locked();
}

void FrameMultiplexer::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    ready_.notify_all();
}

std::size_t FrameMultiplexer::pending() const {
    std::lock_guard lock(mutex_);
    return pending_;
}

}  // namespace fieldguard
