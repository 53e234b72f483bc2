#pragma once

// textcast v1 (.tcast): UTF-8, LF-terminated lines.
//
//   line 1   header object   {"textcast":1,"initial":"...","meta":{...},...}
//   line 2+  one event each  [t_ms, pos, "deleted", "inserted"]
//                            ["cursor", ...]   (extension events, kept opaque)
//
// Offsets count Unicode scalar values. Canonical output orders header keys as
// textcast, initial, meta, then any unknown keys in the order they were read.

#include "textcast/history.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace textcast {

inline constexpr int cast_format_version = 1;

/// An event whose first element is a kind string. Preserved verbatim, never
/// interpreted by the engine.
struct ExtensionEvent {
    nlohmann::ordered_json raw;

    std::string kind() const { return raw.at(0).get<std::string>(); }
    bool operator==(const ExtensionEvent&) const = default;
};

using CastEvent = std::variant<TextChange, ExtensionEvent>;

struct CastDocument {
    nlohmann::ordered_json header = nlohmann::ordered_json::object();
    std::vector<CastEvent> events;

    /// The engine's view: initial text, meta, and the edit events in order.
    EditHistory history() const;

    /// Replaces the edit events with `history`'s changes and updates the
    /// header's initial text and meta. Extension events are dropped since
    /// their anchoring does not survive a rewrite.
    void set_history(const EditHistory& history);

    static CastDocument from_history(const EditHistory& history);
};

struct ParseOptions {
    /// Reject documents whose edit events fail replay_validate.
    bool check_replay = true;
    /// Accept event lines without a header (replacement fragments).
    bool header_optional = false;
};

/// Throws Error with line/column set: NotTextcast, UnsupportedVersion,
/// MalformedEvent, InvalidUtf8, or ReplayInvalid carrying the failing seq.
CastDocument parse_cast(std::string_view bytes, const ParseOptions& options = {});

/// Canonical bytes for the document.
std::string serialize_cast(const CastDocument& doc);

/// One event array `[t_ms, pos, deleted, inserted]`.
nlohmann::ordered_json change_to_json(const TextChange& change);

/// Inverse of change_to_json. Throws MalformedEvent.
TextChange change_from_json(const nlohmann::ordered_json& event);
TextChange change_from_json(const nlohmann::json& event);

CastDocument read_cast_file(const std::string& path, const ParseOptions& options = {});
void write_cast_file(const std::string& path, const CastDocument& doc);

}  // namespace textcast
