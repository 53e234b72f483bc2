#include "textcast/castfile.hpp"

#include "textcast/error.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace textcast {

using json = nlohmann::ordered_json;

namespace {

void set_meta_field(json& meta, const char* key, const std::optional<std::string>& value) {
    if (value) {
        meta[key] = *value;
    } else {
        meta.erase(key);
    }
}

std::optional<std::string> meta_field(const json& meta, const char* key) {
    auto it = meta.find(key);
    if (it == meta.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

json canonical_header(const json& header) {
    json out = json::object();
    out["textcast"] = cast_format_version;
    out["initial"] = header.value("initial", std::string{});
    if (auto it = header.find("meta"); it != header.end()) out["meta"] = *it;
    for (const auto& [key, value] : header.items()) {
        if (key != "textcast" && key != "initial" && key != "meta") out[key] = value;
    }
    return out;
}

template <typename Json>
std::uint64_t non_negative(const Json& v, const char* what) {
    if (v.is_number_unsigned()) return v.template get<std::uint64_t>();
    if (v.is_number_integer() && v.template get<std::int64_t>() >= 0) return v.template get<std::uint64_t>();
    throw Error(ErrorCode::MalformedEvent, std::string(what) + " must be a non-negative integer");
}

template <typename Json>
TextChange decode_change(const Json& event) {
    if (!event.is_array() || event.size() != 4 || !event[2].is_string() || !event[3].is_string()) {
        throw Error(ErrorCode::MalformedEvent, "edit event must be [t_ms, pos, deleted, inserted]");
    }
    TextChange c;
    c.t_ms = non_negative(event[0], "t_ms");
    const std::uint64_t pos = non_negative(event[1], "pos");
    if (pos > std::numeric_limits<std::size_t>::max() / 2) throw Error(ErrorCode::MalformedEvent, "pos is too large");
    c.pos = static_cast<std::size_t>(pos);
    c.deleted = from_utf8(event[2].template get_ref<const std::string&>());
    c.inserted = from_utf8(event[3].template get_ref<const std::string&>());
    return c;
}

}  // namespace

json change_to_json(const TextChange& change) {
    return json::array({change.t_ms, change.pos, to_utf8(change.deleted), to_utf8(change.inserted)});
}

TextChange change_from_json(const nlohmann::ordered_json& event) { return decode_change(event); }

TextChange change_from_json(const nlohmann::json& event) { return decode_change(event); }

EditHistory CastDocument::history() const {
    EditHistory h;
    h.initial_text = from_utf8(header.value("initial", std::string{}));
    if (auto it = header.find("meta"); it != header.end() && it->is_object()) {
        h.meta.title = meta_field(*it, "title");
        h.meta.creator = meta_field(*it, "creator");
        h.meta.created_at = meta_field(*it, "created_at");
    }
    for (const auto& ev : events) {
        if (const auto* c = std::get_if<TextChange>(&ev)) h.changes.push_back(*c);
    }
    renumber(h.changes);
    return h;
}

void CastDocument::set_history(const EditHistory& history) {
    header = canonical_header(header);
    header["initial"] = to_utf8(history.initial_text);
    json meta = header.contains("meta") && header["meta"].is_object() ? header["meta"] : json::object();
    set_meta_field(meta, "title", history.meta.title);
    set_meta_field(meta, "creator", history.meta.creator);
    set_meta_field(meta, "created_at", history.meta.created_at);
    if (meta.empty()) {
        header.erase("meta");
    } else {
        header["meta"] = meta;
        header = canonical_header(header);
    }
    events.clear();
    for (const auto& c : history.changes) events.emplace_back(c);
}

CastDocument CastDocument::from_history(const EditHistory& history) {
    CastDocument doc;
    doc.set_history(history);
    return doc;
}

CastDocument parse_cast(std::string_view bytes, const ParseOptions& options) {
    CastDocument doc;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t edit_count = 0;
    std::vector<std::size_t> edit_lines;

    std::size_t offset = 0;
    while (offset < bytes.size()) {
        std::size_t nl = bytes.find('\n', offset);
        std::string_view line = bytes.substr(offset, nl == std::string_view::npos ? std::string_view::npos : nl - offset);
        offset = nl == std::string_view::npos ? bytes.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        json value;
        try {
            value = json::parse(line);
        } catch (const json::parse_error& e) {
            const auto code = have_header || options.header_optional ? ErrorCode::MalformedEvent : ErrorCode::NotTextcast;
            throw Error(code, "line " + std::to_string(line_no) + ": invalid JSON").at(line_no, e.byte == 0 ? 1 : e.byte);
        }

        if (!have_header && value.is_object()) {
            auto tag = value.find("textcast");
            if (tag == value.end()) {
                throw Error(ErrorCode::NotTextcast, "header has no \"textcast\" field").at(line_no, 1);
            }
            if (!tag->is_number_integer() || tag->get<std::int64_t>() != cast_format_version) {
                throw Error(ErrorCode::UnsupportedVersion, "unsupported textcast version " + tag->dump()).at(line_no, 1);
            }
            if (auto init = value.find("initial"); init != value.end()) {
                if (!init->is_string()) throw Error(ErrorCode::NotTextcast, "\"initial\" must be a string").at(line_no, 1);
                try {
                    from_utf8(init->get_ref<const std::string&>());
                } catch (Error& e) {
                    throw e.at(line_no, 1);
                }
            }
            doc.header = canonical_header(value);
            have_header = true;
            continue;
        }
        if (!have_header && !options.header_optional) {
            throw Error(ErrorCode::NotTextcast, "first line is not a textcast header").at(line_no, 1);
        }
        have_header = true;

        if (value.is_array() && !value.empty() && value[0].is_string()) {
            doc.events.emplace_back(ExtensionEvent{std::move(value)});
            continue;
        }
        try {
            TextChange c = change_from_json(value);
            c.seq = edit_count++;
            doc.events.emplace_back(std::move(c));
            edit_lines.push_back(line_no);
        } catch (Error& e) {
            throw Error(e.code() == ErrorCode::InvalidUtf8 ? ErrorCode::InvalidUtf8 : ErrorCode::MalformedEvent,
                        "line " + std::to_string(line_no) + ": " + e.what())
                .at(line_no, 1);
        }
    }
    if (!have_header && !options.header_optional) {
        throw Error(ErrorCode::NotTextcast, "missing textcast header line").at(1, 1);
    }

    if (options.check_replay) {
        const auto violations = replay_validate(doc.history());
        if (!violations.empty()) {
            const auto& v = violations.front();
            throw Error(ErrorCode::ReplayInvalid,
                        "event " + std::to_string(v.seq) + " fails replay: " + std::string(to_string(v.kind)), v.seq)
                .at(edit_lines[v.seq], 1);
        }
    }
    return doc;
}

std::string serialize_cast(const CastDocument& doc) {
    std::string out = canonical_header(doc.header).dump();
    out.push_back('\n');
    for (const auto& ev : doc.events) {
        if (const auto* c = std::get_if<TextChange>(&ev)) {
            out += change_to_json(*c).dump();
        } else {
            out += std::get<ExtensionEvent>(ev).raw.dump();
        }
        out.push_back('\n');
    }
    return out;
}

CastDocument read_cast_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cast(buf.str(), options);
}

void write_cast_file(const std::string& path, const CastDocument& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_cast(doc);
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace textcast
