#include "fieldguard/ingest.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <system_error>
#include <thread>
#include <vector>

#include "fieldguard/errors.hpp"
#include "fieldguard/scheduler.hpp"
#include "fieldguard/wire.hpp"

namespace fieldguard {
namespace {

constexpr int kAcceptPollMs = 50;

[[noreturn]] void throw_errno(const char* what) {
    throw std::system_error(errno, std::generic_category(), what);
}

void read_connection(int fd, const LineHandler& on_line, const std::atomic<bool>& stopping) {
    std::string pending;
    char buf[4096];
    while (!stopping.load()) {
        pollfd pfd{fd, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, kAcceptPollMs);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) continue;
        const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
        if (n <= 0) {
            break;
        }
        pending.append(buf, static_cast<std::size_t>(n));
        std::size_t start = 0;
        for (std::size_t nl; (nl = pending.find('\n', start)) != std::string::npos; start = nl + 1) {
            on_line(std::string_view(pending).substr(start, nl - start));
        }
        pending.erase(0, start);
    }
    if (!pending.empty() && !stopping.load()) {
        on_line(pending);
    }
    ::close(fd);
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

InputSpec parse_input_spec(std::string_view text) {
    InputSpec spec;
    if (text.empty() || text == "-") {
        return spec;
    }
    if (text.starts_with("tcp:")) {
        const std::string_view rest = text.substr(4);
        const auto colon = rest.rfind(':');
        if (colon == std::string_view::npos || colon == 0) {
            throw ProtocolError("tcp input must look like tcp:host:port", 0);
        }
        unsigned port = 0;
        const std::string_view port_text = rest.substr(colon + 1);
        const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535) {
            throw ProtocolError("invalid tcp port '" + std::string(port_text) + "'", 0);
        }
        spec.kind = InputSpec::Kind::tcp;
        spec.host = std::string(rest.substr(0, colon));
        spec.port = static_cast<std::uint16_t>(port);
        return spec;
    }
    spec.kind = InputSpec::Kind::file;
    spec.path = std::string(text);
    return spec;
}

void for_each_line(std::istream& input, const LineHandler& on_line) {
    std::string line;
    while (std::getline(input, line)) {
        on_line(line);
    }
}

TcpLineServer::TcpLineServer(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string port_text = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), port_text.c_str(), &hints, &res);
        rc != 0) {
        throw std::system_error(std::make_error_code(std::errc::invalid_argument),
                                std::string("getaddrinfo: ") + ::gai_strerror(rc));
    }
    listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (listen_fd_ < 0) {
        ::freeaddrinfo(res);
        throw_errno("socket");
    }
    const int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    if (::bind(listen_fd_, res->ai_addr, res->ai_addrlen) < 0) {
        const int saved = errno;
        ::freeaddrinfo(res);
        ::close(listen_fd_);
        errno = saved;
        throw_errno("bind");
    }
    ::freeaddrinfo(res);
    if (::listen(listen_fd_, 64) < 0) {
        ::close(listen_fd_);
        throw_errno("listen");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

TcpLineServer::~TcpLineServer() {
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
    }
}

void TcpLineServer::stop() { stopping_.store(true); }

void TcpLineServer::serve(std::size_t max_connections, const LineHandler& on_line) {
    std::vector<std::thread> readers;
    std::size_t accepted = 0;
    while (!stopping_.load() && (max_connections == 0 || accepted < max_connections)) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, kAcceptPollMs);
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) continue;
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            continue;
        }
        ++accepted;
        readers.emplace_back(read_connection, fd, std::cref(on_line), std::cref(stopping_));
    }
    for (auto& t : readers) {
        t.join();
    }
}

RunStats run_live(const SystemConfig& config, const InputSpec& input, EventLog& log,
                  std::size_t max_connections,
                  const std::function<void(std::uint16_t)>& on_listening) {
    std::vector<std::string> ids;
    for (const auto& c : config.cameras) {
        ids.push_back(c.intrinsics.camera_id());
    }
    FrameMultiplexer mux(ids);
    Engine engine(config, log, ClockMode::live);
    RunStats stats;

    const auto consume = [&](const DetectionFrame& frame) {
        const FrameOutcome out = engine.handle(frame);
        ++stats.frames;
        stats.commands += out.commands.size();
        stats.alerts += out.alerts.size();
    };

    if (input.kind != InputSpec::Kind::tcp) {
        std::ifstream file;
        std::istream* in = &std::cin;
        if (input.kind == InputSpec::Kind::file) {
            file.open(input.path);
            if (!file) {
                throw ProtocolError("cannot open input " + input.path, 0);
            }
            in = &file;
        }
        FrameReader reader;
        std::size_t line_no = 0;
        for_each_line(*in, [&](std::string_view line) {
            ++line_no;
            if (is_blank(line)) return;
            try {
                mux.push(reader.read(line));
            } catch (const ProtocolError& e) {
                throw ProtocolError("line " + std::to_string(line_no) + ": " + e.what(), e.byte_offset());
            }
            while (auto f = mux.try_next()) consume(*f);
        });
        mux.close();
        while (auto f = mux.try_next()) consume(*f);
        return stats;
    }

    TcpLineServer server(input.host, input.port);
    if (on_listening) {
        on_listening(server.port());
    }

    std::mutex ingest_mutex;
    FrameSequencer sequencer;
    std::exception_ptr failure;
    const auto fail = [&](std::exception_ptr e) {
        std::lock_guard lock(ingest_mutex);
        if (!failure) failure = e;
        server.stop();
    };

    std::thread producer([&] {
        try {
            server.serve(max_connections, [&](std::string_view line) {
                if (is_blank(line)) return;
                try {
                    DetectionFrame frame = parse_frame_line(line);
                    {
                        std::lock_guard lock(ingest_mutex);
                        sequencer.accept(frame);
                    }
                    mux.push(std::move(frame));
                } catch (...) {
                    fail(std::current_exception());
                }
            });
        } catch (...) {
            fail(std::current_exception());
        }
        mux.close();
    });

    try {
        while (auto f = mux.wait_next()) {
            consume(*f);
        }
    } catch (...) {
        fail(std::current_exception());
        mux.close();
    }
    producer.join();
    if (failure) {
        std::rethrow_exception(failure);
    }
    return stats;
}

}  // namespace fieldguard
