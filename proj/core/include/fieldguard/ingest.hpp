#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include "fieldguard/config.hpp"
#include "fieldguard/engine.hpp"

namespace fieldguard {

/// `-` for stdin, `tcp:host:port` to listen for detection streams, or a path.
struct InputSpec {
    enum class Kind { standard_input, file, tcp };
    Kind kind = Kind::standard_input;
    std::string path;
    std::string host;
    std::uint16_t port = 0;
};

/// Throws ProtocolError for a malformed tcp spec.
InputSpec parse_input_spec(std::string_view text);

using LineHandler = std::function<void(std::string_view line)>;

/// Calls `on_line` for each newline-terminated (or final) line of `input`.
void for_each_line(std::istream& input, const LineHandler& on_line);

/// Listening TCP socket accepting line-delimited detection streams, one
/// producer thread per connection. `on_line` is called concurrently from
/// those threads.
class TcpLineServer {
public:
    /// Binds and listens; port 0 picks an ephemeral port. Throws
    /// std::system_error on socket failures.
    TcpLineServer(const std::string& host, std::uint16_t port);
    ~TcpLineServer();

    TcpLineServer(const TcpLineServer&) = delete;
    TcpLineServer& operator=(const TcpLineServer&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    /// Accepts connections until `max_connections` have been served (0 means
    /// unbounded) or stop() is called, then joins every reader.
    void serve(std::size_t max_connections, const LineHandler& on_line);

    /// Safe to call from another thread or a handler.
    void stop();

private:
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
};

/// Live engine: producers parse and sequence frames, the multiplexer merges
/// them, and a single consumer runs the engine with host-clock timestamps.
/// The first protocol or sequencing error stops ingestion and is rethrown.
/// For TCP input, `on_listening` receives the bound port.
RunStats run_live(const SystemConfig& config, const InputSpec& input, EventLog& log,
                  std::size_t max_connections = 0,
                  const std::function<void(std::uint16_t)>& on_listening = {});

}  // namespace fieldguard
