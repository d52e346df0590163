#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fieldguard {

/// A numeric argument outside an operation's domain (negative distance,
/// zero speed, non-positive focal length, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid system or scenario configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input on the detection stream. Maps to CLI exit code 3.
class ProtocolError : public std::runtime_error {
public:
    ProtocolError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// A frame arrived with a frame_index not strictly greater than the last
/// one accepted for the same camera.
class SequencingError : public std::runtime_error {
public:
    SequencingError(std::string camera_id, std::uint64_t previous, std::uint64_t received);

    const std::string& camera_id() const noexcept { return camera_id_; }
    std::uint64_t previous_index() const noexcept { return previous_; }
    std::uint64_t received_index() const noexcept { return received_; }

private:
    std::string camera_id_;
    std::uint64_t previous_;
    std::uint64_t received_;
};

/// Event log write failure. The engine stops instead of dropping commands.
class LogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fieldguard
