#include "textcast/service.hpp"

#include "textcast/error.hpp"
#include "textcast/rewrite.hpp"
#include "textcast/selection.hpp"

#include <httplib.h>

#include <charconv>
#include <utility>

namespace textcast {

using json = nlohmann::json;

struct CastService::State {
    CastDocument doc;
    EditHistory history;
    SnapshotIndex index;
    std::uint64_t rev = 0;

    State(CastDocument d, std::uint64_t r)
        : doc(std::move(d)), history(doc.history()), index(history), rev(r) {}
};

namespace {

ApiResponse error_response(int status, std::string_view code, const std::string& message, json details = json::object()) {
    return ApiResponse{status, json{{"code", code}, {"message", message}, {"details", std::move(details)}}};
}

/// Request body problems surface as 400s.
struct BadRequest {
    std::string message;
};

json parse_body(std::string_view body) {
    try {
        json v = json::parse(body);
        if (!v.is_object()) throw BadRequest{"request body must be a JSON object"};
        return v;
    } catch (const json::parse_error& e) {
        throw BadRequest{std::string("invalid JSON body: ") + e.what()};
    }
}

std::uint64_t field_uint(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end()) throw BadRequest{std::string("missing field \"") + key + "\""};
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    if (it->is_number_integer() && it->get<std::int64_t>() >= 0) return it->get<std::uint64_t>();
    throw BadRequest{std::string("field \"") + key + "\" must be a non-negative integer"};
}

json interval_json(const AreaInterval& iv) { return json{{"start", iv.start}, {"end", iv.end}}; }

json report_json(const ValidationReport& report) {
    json conflicts = json::array();
    for (const auto& c : report.conflicts) {
        conflicts.push_back(json{{"seq", c.seq},
                                 {"footprint", json{{"start", c.footprint.start},
                                                    {"end", c.footprint.end},
                                                    {"kind", to_string(c.footprint.kind)}}},
                                 {"interval", interval_json(c.interval)},
                                 {"frame_version", c.frame_version}});
    }
    return json{{"ok", report.ok}, {"conflicts", std::move(conflicts)}};
}

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::AmbiguousRange:
    case ErrorCode::ReplacementEscapesRegion:
    case ErrorCode::OffsetOutOfBounds:
    case ErrorCode::DeletedTextMismatch:
        return 422;
    case ErrorCode::EmptySelection:
        return 404;
    case ErrorCode::MappingShapeMismatch:
    case ErrorCode::CorruptHistory:
    case ErrorCode::InteriorIntersection:
    case ErrorCode::UnmappablePosition:
        return 500;
    default:
        return 400;
    }
}

template <typename Fn>
ApiResponse guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const BadRequest& e) {
        return error_response(400, "BadRequest", e.message);
    } catch (const Error& e) {
        json details = json::object();
        if (e.seq()) details["seq"] = *e.seq();
        return error_response(status_for(e.code()), to_string(e.code()), e.what(), std::move(details));
    }
}

}  // namespace

CastService::CastService(CastDocument doc, std::optional<std::string> save_path)
    : state_(std::make_shared<const State>(std::move(doc), 0)), save_path_(std::move(save_path)) {}

std::shared_ptr<const CastService::State> CastService::current() const {
    std::lock_guard lock(state_mutex_);
    return state_;
}

std::uint64_t CastService::rev_token() const { return current()->rev; }

EditHistory CastService::history() const { return current()->history; }

ApiResponse CastService::get_cast() const {
    auto s = current();
    json changes = json::array();
    for (const auto& c : s->history.changes) {
        changes.push_back(json::array({c.t_ms, c.pos, to_utf8(c.deleted), to_utf8(c.inserted)}));
    }
    return ApiResponse{200, json{{"header", json::parse(s->doc.header.dump())},
                                 {"changes", std::move(changes)},
                                 {"rev_token", s->rev}}};
}

ApiResponse CastService::get_snapshot(std::optional<std::string_view> version) const {
    return guarded([&] {
        if (!version) throw BadRequest{"missing query parameter \"version\""};
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(version->data(), version->data() + version->size(), v);
        if (ec != std::errc{} || ptr != version->data() + version->size()) {
            throw BadRequest{"\"version\" must be a non-negative integer"};
        }
        auto s = current();
        Snapshot snap = s->index.at(v);
        return ApiResponse{200, json{{"version", snap.version}, {"text", to_utf8(snap.text)}, {"rev_token", s->rev}}};
    });
}

ApiResponse CastService::select_time(std::string_view body) const {
    return guarded([&] {
        json req = parse_body(body);
        TimeWindow w{field_uint(req, "t0"), field_uint(req, "t1")};
        if (w.t0_ms > w.t1_ms) throw BadRequest{"t0 must not exceed t1"};
        HistoryRange r = select_by_time(current()->history, w);
        return ApiResponse{200, json{{"start", r.start}, {"end", r.end}}};
    });
}

ApiResponse CastService::select_text(std::string_view body) const {
    return guarded([&] {
        json req = parse_body(body);
        TextSpan span{field_uint(req, "version"), field_uint(req, "start"), field_uint(req, "end")};
        HistoryRange r = select_by_text(current()->history, span);
        return ApiResponse{200, json{{"start", r.start}, {"end", r.end}}};
    });
}

ApiResponse CastService::validate(std::string_view body) const {
    return guarded([&] {
        json req = parse_body(body);
        HistoryRange range{field_uint(req, "start"), field_uint(req, "end")};
        auto s = current();
        ValidationReport report = validate_rewrite(s->history, range);
        EffectiveArea editable = editable_region(s->history, range);
        json out = report_json(report);
        json intervals = json::array();
        for (const auto& iv : editable.intervals) intervals.push_back(interval_json(iv));
        out["editable"] = std::move(intervals);
        out["frame_version"] = editable.frame_version;
        out["rev_token"] = s->rev;
        return ApiResponse{200, std::move(out)};
    });
}

ApiResponse CastService::rewrite(std::string_view body) {
    return guarded([&] {
        json req = parse_body(body);
        HistoryRange range{field_uint(req, "start"), field_uint(req, "end")};
        const std::uint64_t token = field_uint(req, "rev_token");
        auto repl_it = req.find("replacement");
        if (repl_it == req.end() || !repl_it->is_array()) throw BadRequest{"\"replacement\" must be an array of events"};
        Replacement repl;
        for (const auto& ev : *repl_it) {
            try {
                repl.changes.push_back(change_from_json(ev));
            } catch (const Error& e) {
                throw BadRequest{std::string("bad replacement event: ") + e.what()};
            }
        }
        renumber(repl.changes);

        std::lock_guard writer(writer_mutex_);
        auto s = current();
        if (token != s->rev) {
            return error_response(409, "StaleToken",
                                  "rev_token " + std::to_string(token) + " is stale; current is " + std::to_string(s->rev),
                                  json{{"rev_token", s->rev}});
        }
        RewriteResult result = substitute(s->history, range, repl);

        CastDocument doc = s->doc;
        doc.set_history(result.history);
        auto next = std::make_shared<const State>(std::move(doc), s->rev + 1);
        if (save_path_) write_cast_file(*save_path_, next->doc);
        {
            std::lock_guard lock(state_mutex_);
            state_ = next;
        }

        json mapping = json::array();
        for (const auto& [o, n] : result.mapping.pairs) {
            mapping.push_back(json{{"old", interval_json(o)}, {"new", interval_json(n)}});
        }
        json summary{{"changes", next->history.size()},
                     {"duration_ms", duration_ms(next->history)},
                     {"final_text", to_utf8(next->index.final_text())},
                     {"mapping", std::move(mapping)}};
        return ApiResponse{200, json{{"rev_token", next->rev}, {"summary", std::move(summary)}}};
    });
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
    httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json");
}

constexpr const char* fallback_index = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>textcast</title></head>
<body><h1>textcast</h1>
<p>No editor bundle mounted (start with <code>--ui DIR</code>). API endpoints:</p>
<ul><li>GET /api/cast</li><li>GET /api/snapshot?version=N</li><li>POST /api/select/time</li>
<li>POST /api/select/text</li><li>POST /api/validate</li><li>POST /api/rewrite</li></ul>
</body></html>
)";

}  // namespace

HttpServer::HttpServer(CastService& service, ServeOptions options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {
    auto& srv = impl_->server;
    // httplib's default adds SO_REUSEPORT, which would let a second server
    // silently share a port that is already in use.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    srv.Get("/api/cast", [&service](const httplib::Request&, httplib::Response& res) { reply(res, service.get_cast()); });
    srv.Get("/api/snapshot", [&service](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> version;
        if (req.has_param("version")) version = req.get_param_value("version");
        reply(res, service.get_snapshot(version ? std::optional<std::string_view>(*version) : std::nullopt));
    });
    srv.Post("/api/select/time", [&service](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.select_time(req.body));
    });
    srv.Post("/api/select/text", [&service](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.select_text(req.body));
    });
    srv.Post("/api/validate", [&service](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.validate(req.body));
    });
    srv.Post("/api/rewrite", [&service](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.rewrite(req.body));
    });
    if (options_.static_dir) {
        srv.set_mount_point("/", *options_.static_dir);
    } else {
        srv.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(fallback_index, "text/html"); });
    }
    srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const std::string code = res.status == 404 ? "NotFound" : "HttpError";
        reply(res, error_response(res.status, code, "no route for " + req.method + " " + req.path));
    });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind() {
    auto& srv = impl_->server;
    if (options_.port == 0) {
        port_ = srv.bind_to_any_port(options_.host);
        return port_ > 0;
    }
    if (!srv.bind_to_port(options_.host, options_.port)) return false;
    port_ = options_.port;
    return true;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace textcast
