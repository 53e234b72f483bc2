#pragma once

#include "textcast/castfile.hpp"
#include "textcast/history.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace textcast {

/// Status plus JSON body. Errors use {code, message, details}.
struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// One loaded cast behind the editor API.
///
/// Reads grab an immutable snapshot of the session state and never block on
/// a rewrite in progress. Rewrites are funneled through a single writer and
/// must present the current rev_token; a successful rewrite bumps it.
class CastService {
public:
    explicit CastService(CastDocument doc, std::optional<std::string> save_path = std::nullopt);

    ApiResponse get_cast() const;
    ApiResponse get_snapshot(std::optional<std::string_view> version) const;
    ApiResponse select_time(std::string_view body) const;
    ApiResponse select_text(std::string_view body) const;
    ApiResponse validate(std::string_view body) const;
    ApiResponse rewrite(std::string_view body);

    std::uint64_t rev_token() const;
    EditHistory history() const;

private:
    struct State;

    std::shared_ptr<const State> current() const;

    mutable std::mutex state_mutex_;
    std::shared_ptr<const State> state_;
    std::mutex writer_mutex_;
    std::optional<std::string> save_path_;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Directory holding the editor's static bundle, served at `/`.
    std::optional<std::string> static_dir;
};

/// HTTP front end for a CastService.
class HttpServer {
public:
    HttpServer(CastService& service, ServeOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the listening socket; port 0 picks a free port. False if taken.
    bool bind();
    int port() const noexcept { return port_; }
    /// Serves until stop() is called from another thread.
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    ServeOptions options_;
    int port_ = -1;
};

}  // namespace textcast
