#include "textcast/cli.hpp"

#include "textcast/castfile.hpp"
#include "textcast/error.hpp"
#include "textcast/rewrite.hpp"
#include "textcast/selection.hpp"
#include "textcast/service.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

namespace textcast::cli {

namespace {

/// Thrown for malformed flag values that CLI11 cannot check by itself.
struct UsageError {
    std::string message;
};

/// Thrown when the cast cannot be read or parsed.
struct IoError {
    std::string message;
};

std::vector<std::uint64_t> split_numbers(const std::string& value, std::size_t count, const char* shape) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ':')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) break;
        out.push_back(std::stoull(part));
    }
    if (out.size() != count || std::count(value.begin(), value.end(), ':') != static_cast<long>(count - 1)) {
        throw UsageError{"expected " + std::string(shape) + ", got '" + value + "'"};
    }
    return out;
}

HistoryRange parse_range(const std::string& value) {
    auto n = split_numbers(value, 2, "START:END");
    return HistoryRange{n[0], n[1]};
}

CastDocument load(const std::string& path, ParseOptions options = {}) {
    try {
        return read_cast_file(path, options);
    } catch (const Error& e) {
        std::string where;
        if (e.line()) where = ":" + std::to_string(*e.line()) + ":" + std::to_string(e.column().value_or(1));
        throw IoError{path + where + ": " + std::string(to_string(e.code())) + ": " + e.what()};
    } catch (const std::runtime_error& e) {
        throw IoError{e.what()};
    }
}

std::string describe(const AreaInterval& iv) {
    if (iv.is_point()) return "point " + std::to_string(iv.start);
    return "[" + std::to_string(iv.start) + "," + std::to_string(iv.end) + ")";
}

std::string describe(const Footprint& fp) {
    if (fp.is_caret()) return "caret @" + std::to_string(fp.start);
    return std::string(to_string(fp.kind)) + " [" + std::to_string(fp.start) + "," + std::to_string(fp.end) + ")";
}

std::string verdict(const HistoryRange& range, const ValidationReport& report) {
    std::string line = "range " + std::to_string(range.start) + ":" + std::to_string(range.end);
    if (report.ok) return line + " valid";
    line += " ambiguous seq=";
    for (std::size_t i = 0; i < report.conflicts.size(); ++i) {
        line += (i ? "," : "") + std::to_string(report.conflicts[i].seq);
    }
    return line;
}

int cmd_info(const std::string& path, std::ostream& out) {
    const CastDocument doc = load(path);
    const EditHistory h = doc.history();
    const SnapshotIndex index(h);
    out << "changes: " << h.size() << "\n";
    out << "duration: " << duration_ms(h) << "ms\n";
    out << "initial length: " << h.initial_text.size() << "\n";
    out << "final length: " << index.final_text().size() << "\n";
    const auto extensions = doc.events.size() - h.size();
    if (extensions > 0) out << "extension events: " << extensions << "\n";
    if (h.meta.title) out << "title: " << *h.meta.title << "\n";
    if (h.meta.creator) out << "creator: " << *h.meta.creator << "\n";
    if (h.meta.created_at) out << "created at: " << *h.meta.created_at << "\n";
    return exit_ok;
}

int cmd_check(const std::string& path, std::ostream& out) {
    ParseOptions lenient;
    lenient.check_replay = false;
    const EditHistory h = load(path, lenient).history();
    const auto violations = replay_validate(h);
    for (const auto& v : violations) out << "seq " << v.seq << ": " << to_string(v.kind) << "\n";
    out << (violations.empty() ? "ok" : "invalid") << " (" << h.size() << " changes)\n";
    return violations.empty() ? exit_ok : exit_rejected;
}

int cmd_play(const std::string& path, double speed, bool no_delay, std::ostream& out) {
    if (!(speed > 0)) throw UsageError{"--speed must be positive"};
    const EditHistory h = load(path).history();
    Text text = h.initial_text;
    if (no_delay) {
        for (const auto& c : h.changes) apply_change_in_place(text, c);
        out << to_utf8(text) << "\n";
        return exit_ok;
    }
    auto redraw = [&] { out << "\x1b[2J\x1b[H" << to_utf8(text) << "\n" << std::flush; };
    redraw();
    const auto start = std::chrono::steady_clock::now();
    for (const auto& c : h.changes) {
        std::this_thread::sleep_until(start + std::chrono::duration<double, std::milli>(static_cast<double>(c.t_ms) / speed));
        apply_change_in_place(text, c);
        redraw();
    }
    return exit_ok;
}

int cmd_select(const std::string& path, const std::optional<std::string>& time, const std::optional<std::string>& span,
               std::ostream& out, std::ostream& err) {
    if (time.has_value() == span.has_value()) throw UsageError{"give exactly one of --time or --text"};
    const EditHistory h = load(path).history();
    HistoryRange range;
    try {
        if (time) {
            auto n = split_numbers(*time, 2, "T0:T1");
            if (n[0] > n[1]) throw UsageError{"--time needs T0 <= T1"};
            range = select_by_time(h, TimeWindow{n[0], n[1]});
        } else {
            auto n = split_numbers(*span, 3, "VERSION:START:END");
            range = select_by_text(h, TextSpan{n[0], n[1], n[2]});
        }
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == ErrorCode::SpanOutOfBounds ? exit_usage : exit_rejected;
    }
    const ValidationReport report = selection_validity(h, range);
    out << verdict(range, report) << "\n";
    return report.ok ? exit_ok : exit_rejected;
}

int cmd_validate(const std::string& path, const std::string& range_flag, std::ostream& out) {
    const HistoryRange range = parse_range(range_flag);
    const EditHistory h = load(path).history();
    const ValidationReport report = validate_rewrite(h, range);
    out << verdict(range, report) << "\n";
    for (const auto& c : report.conflicts) {
        out << "  conflict seq=" << c.seq << " " << describe(c.footprint) << " hits " << describe(c.interval)
            << " at version " << c.frame_version << "\n";
    }
    const EffectiveArea editable = editable_region(h, range);
    out << "editable at version " << editable.frame_version << ":";
    for (const auto& iv : editable.intervals) out << " " << describe(iv);
    out << "\n";
    return report.ok ? exit_ok : exit_rejected;
}

/// One insertion per scalar, `delay_ms` apart, preceded by a deletion of the
/// region's current text when it is not a bare caret.
Replacement synthesize_typing(const EditHistory& h, const HistoryRange& range, const Text& literal,
                              unsigned delay_ms) {
    const EffectiveArea editable = editable_region(h, range);
    if (editable.intervals.size() != 1) {
        throw UsageError{"--type needs a single editable region, this range has " +
                         std::to_string(editable.intervals.size()) + "; use --with"};
    }
    const AreaInterval target = editable.intervals.front();
    Replacement repl;
    std::uint64_t t = 0;
    if (!target.is_point()) {
        const Text base = materialize(h, range.start).text;
        repl.changes.push_back(make_delete(target.start, base.substr(target.start, target.width()), t));
        t += delay_ms;
    }
    for (std::size_t i = 0; i < literal.size(); ++i) {
        repl.changes.push_back(make_insert(target.start + i, Text(1, literal[i]), t));
        t += delay_ms;
    }
    renumber(repl.changes);
    return repl;
}

int cmd_rewrite(const std::string& path, const std::string& range_flag, const std::optional<std::string>& with,
                const std::optional<std::string>& typed, unsigned delay_ms, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    if (with.has_value() == typed.has_value()) throw UsageError{"give exactly one of --with or --type"};
    const HistoryRange range = parse_range(range_flag);
    const CastDocument doc = load(path);
    const EditHistory h = doc.history();
    check_range(h, range);

    const ValidationReport report = validate_rewrite(h, range);
    if (!report.ok) {
        err << "AmbiguousRange: " << verdict(range, report) << "\n";
        return exit_rejected;
    }

    Replacement repl;
    if (with) {
        ParseOptions fragment;
        fragment.check_replay = false;
        fragment.header_optional = true;
        repl.changes = load(*with, fragment).history().changes;
    } else {
        Text literal;
        try {
            literal = from_utf8(*typed);
        } catch (const Error& e) {
            throw UsageError{e.what()};
        }
        repl = synthesize_typing(h, range, literal, delay_ms);
    }

    RewriteResult result;
    try {
        result = substitute(h, range, repl);
    } catch (const Error& e) {
        switch (e.code()) {
        case ErrorCode::AmbiguousRange:
        case ErrorCode::ReplacementEscapesRegion:
        case ErrorCode::OffsetOutOfBounds:
        case ErrorCode::DeletedTextMismatch:
        case ErrorCode::NoOpChange:
        case ErrorCode::TimestampOrder:
            err << to_string(e.code()) << ": " << e.what() << "\n";
            return exit_rejected;
        default:
            throw;
        }
    }

    CastDocument rewritten = doc;
    rewritten.set_history(result.history);
    try {
        write_cast_file(out_path, rewritten);
    } catch (const std::runtime_error& e) {
        throw IoError{e.what()};
    }

    out << "rewrote range " << range.start << ":" << range.end << " with " << repl.changes.size() << " changes; "
        << h.size() << " -> " << result.history.size() << " changes\n";
    for (std::size_t i = 0; i < result.mapping.pairs.size(); ++i) {
        const auto& [o, n] = result.mapping.pairs[i];
        const auto delta = result.mapping.delta_after(i);
        out << "  " << describe(o) << " -> " << describe(n) << " delta " << (delta >= 0 ? "+" : "") << delta << "\n";
    }
    out << "wrote " << out_path << "\n";
    return exit_ok;
}

int cmd_serve(const std::string& path, const std::string& host, int port, const std::optional<std::string>& ui_dir,
              bool save, std::ostream& out, std::ostream& err) {
    CastService service(load(path), save ? std::optional<std::string>(path) : std::nullopt);
    HttpServer server(service, ServeOptions{host, port, ui_dir});
    if (!server.bind()) {
        err << "cannot listen on " << host << ":" << port << " (port in use?)\n";
        return exit_io;
    }

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &signals, &previous);

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });

    out << "serving " << path << " on http://" << host << ":" << server.port() << "/" << std::endl;
    const bool ok = server.listen();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    // Drain the wake-up signal before unblocking.
    sigset_t pending;
    sigpending(&pending);
    while (sigismember(&pending, SIGTERM) || sigismember(&pending, SIGINT)) {
        int sig = 0;
        sigwait(&signals, &sig);
        sigpending(&pending);
    }
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    return ok ? exit_ok : exit_io;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Record, play and non-linearly edit text-based screencasts (.tcast)", "textcast"};
    app.require_subcommand(1);

    std::string path;
    std::string range_flag;
    std::optional<std::string> time_flag, text_flag, with_flag, type_flag, ui_dir;
    std::string out_path;
    double speed = 1.0;
    bool no_delay = false;
    bool save = false;
    unsigned delay_ms = default_type_delay_ms;
    int port = 8080;
    std::string host = "127.0.0.1";

    auto* info = app.add_subcommand("info", "Summarize a cast");
    info->add_option("cast", path, "Cast file")->required();

    auto* check = app.add_subcommand("check", "Report every integrity problem in a cast");
    check->add_option("cast", path, "Cast file")->required();

    auto* play = app.add_subcommand("play", "Replay a cast in the terminal");
    play->add_option("cast", path, "Cast file")->required();
    play->add_option("--speed", speed, "Playback speed multiplier");
    play->add_flag("--no-delay", no_delay, "Print only the final text");

    auto* select = app.add_subcommand("select", "Select a history range by time or by text");
    select->add_option("cast", path, "Cast file")->required();
    select->add_option("--time", time_flag, "Timeline window T0:T1 in ms");
    select->add_option("--text", text_flag, "Text span VERSION:START:END");

    auto* validate = app.add_subcommand("validate", "Check whether a range can be rewritten");
    validate->add_option("cast", path, "Cast file")->required();
    validate->add_option("--range", range_flag, "History range START:END")->required();

    auto* rewrite = app.add_subcommand("rewrite", "Substitute a history range");
    rewrite->add_option("cast", path, "Cast file")->required();
    rewrite->add_option("--range", range_flag, "History range START:END")->required();
    rewrite->add_option("--with", with_flag, "Replacement events (.tcast, header optional)");
    rewrite->add_option("--type", type_flag, "Literal text to type into the editable region");
    rewrite->add_option("--delay", delay_ms, "Inter-key delay for --type, in ms");
    rewrite->add_option("--out", out_path, "Output cast")->required();

    auto* serve = app.add_subcommand("serve", "Serve the editor API for a cast");
    serve->add_option("cast", path, "Cast file")->required();
    serve->add_option("--port", port, "TCP port (0 picks a free one)");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--ui", ui_dir, "Directory with the editor bundle");
    serve->add_flag("--save", save, "Write successful rewrites back to the cast file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << "Run with --help for usage.\n";
        return exit_usage;
    }

    try {
        if (*info) return cmd_info(path, out);
        if (*check) return cmd_check(path, out);
        if (*play) return cmd_play(path, speed, no_delay, out);
        if (*select) return cmd_select(path, time_flag, text_flag, out, err);
        if (*validate) return cmd_validate(path, range_flag, out);
        if (*rewrite) return cmd_rewrite(path, range_flag, with_flag, type_flag, delay_ms, out_path, out, err);
        if (*serve) return cmd_serve(path, host, port, ui_dir, save, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.message << "\n";
        return exit_usage;
    } catch (const IoError& e) {
        err << e.message << "\n";
        return exit_io;
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::EmptyRange:
        case ErrorCode::RangeOutOfBounds:
        case ErrorCode::SpanOutOfBounds:
            return exit_usage;
        case ErrorCode::CorruptHistory:
            return exit_io;
        default:
            return exit_rejected;
        }
    }
    return exit_usage;
}

}  // namespace textcast::cli
