#pragma once

#include "textcast/area.hpp"
#include "textcast/history.hpp"
#include "textcast/rewrite.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace textcast::testing {

inline Text T(const char* s) { return from_utf8(s); }

inline EditHistory make_history(Text initial, std::vector<TextChange> changes) {
    EditHistory h;
    h.initial_text = std::move(initial);
    h.changes = std::move(changes);
    renumber(h.changes);
    return h;
}

/// Types a sentence, appends " jumps", then deletes "quick ".
inline EditHistory history_h() {
    return make_history({}, {make_insert(0, T("The quick brown fox"), 0),
                             make_insert(19, T(" jumps"), 1000),
                             make_delete(4, T("quick "), 2000)});
}

/// Deleting "brown " and typing "swift " at the same spot: undoing only the
/// deletion leaves two equally plausible sentences.
inline EditHistory history_f() {
    return make_history({}, {make_insert(0, T("The quick brown fox"), 0),
                             make_delete(10, T("brown "), 1000),
                             make_insert(10, T("swift "), 2000)});
}

/// One insertion per keystroke, 100 ms apart.
inline EditHistory typed_history(const std::string& sentence, std::uint64_t step_ms = 100) {
    const Text text = from_utf8(sentence);
    std::vector<TextChange> changes;
    for (std::size_t i = 0; i < text.size(); ++i) changes.push_back(make_insert(i, Text(1, text[i]), i * step_ms));
    return make_history({}, std::move(changes));
}

inline const std::string fox_sentence = "The quick brown fox jumps over the lazy dog";

inline Text random_text(std::mt19937_64& rng, std::size_t len, const Text& alphabet) {
    Text t;
    for (std::size_t i = 0; i < len; ++i) t.push_back(alphabet[rng() % alphabet.size()]);
    return t;
}

/// A random edit that applies to `doc` and keeps it within `max_len`.
inline TextChange random_change(std::mt19937_64& rng, const Text& doc, std::size_t max_len, const Text& alphabet,
                                std::size_t max_piece = 3) {
    for (;;) {
        const std::size_t pos = rng() % (doc.size() + 1);
        const std::size_t room = doc.size() - pos;
        const std::size_t del = room == 0 ? 0 : rng() % (std::min(room, max_piece) + 1);
        std::size_t ins = rng() % (max_piece + 1);
        if (doc.size() - del + ins > max_len) ins = max_len + del > doc.size() ? max_len + del - doc.size() : 0;
        if (del == 0 && ins == 0) continue;
        return make_replace(pos, doc.substr(pos, del), random_text(rng, ins, alphabet));
    }
}

inline EditHistory random_history(std::mt19937_64& rng, std::size_t changes, std::size_t max_len,
                                  const Text& alphabet, std::size_t max_piece = 3) {
    EditHistory h;
    h.initial_text = random_text(rng, rng() % (max_len / 2 + 1), alphabet);
    Text doc = h.initial_text;
    std::uint64_t t = 0;
    for (std::size_t k = 0; k < changes; ++k) {
        TextChange c = random_change(rng, doc, max_len, alphabet, max_piece);
        t += rng() % 4;
        c.t_ms = t;
        doc = apply_change(doc, c);
        h.changes.push_back(std::move(c));
    }
    renumber(h.changes);
    return h;
}

/// Random edits that stay inside the evolving editable region.
inline Replacement random_replacement(std::mt19937_64& rng, const Text& base, const EffectiveArea& editable,
                                      std::size_t count, const Text& alphabet) {
    Replacement repl;
    Text doc = base;
    EffectiveArea region = editable;
    std::uint64_t t = 0;
    for (std::size_t j = 0; j < count && !region.intervals.empty(); ++j) {
        const AreaInterval iv = region.intervals[rng() % region.intervals.size()];
        const std::size_t a = iv.start + rng() % (iv.width() + 1);
        const std::size_t b = a + rng() % (iv.end - a + 1);
        Text ins = random_text(rng, rng() % 3, alphabet);
        if (a == b && ins.empty()) ins = random_text(rng, 1, alphabet);
        TextChange c = make_replace(a, doc.substr(a, b - a), std::move(ins), t);
        t += rng() % 50;
        doc = apply_change(doc, c);
        region = absorb_change(region, c);
        repl.changes.push_back(std::move(c));
    }
    renumber(repl.changes);
    return repl;
}

inline std::vector<AreaInterval> positive_spans(const std::vector<AreaInterval>& ivs) {
    std::vector<AreaInterval> out;
    for (const auto& iv : ivs) {
        if (!iv.is_point()) out.push_back(iv);
    }
    return out;
}

/// `text` with every span removed (spans sorted, non-overlapping).
inline Text without_spans(const Text& text, const std::vector<AreaInterval>& spans) {
    Text out;
    std::size_t at = 0;
    for (const auto& iv : spans) {
        out.append(text, at, iv.start - at);
        at = iv.end;
    }
    out.append(text, at, Text::npos);
    return out;
}

/// Checks that every suffix version of `result` agrees with the original once
/// the effective area is cut out of both. The mapping is advanced change by
/// change and cross-checked against shifting the post-image directly.
inline bool outside_area_equal(const EditHistory& original, const HistoryRange& range, const RewriteResult& result,
                               std::size_t repl_size, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    EffectiveArea area = compute_range_area(original, range).post_image;
    PositionMapping mapping = result.mapping;
    const SnapshotIndex old_index(original, 1);
    const SnapshotIndex new_index(result.history, 1);
    for (std::size_t k = range.end;; ++k) {
        std::vector<AreaInterval> olds, news;
        for (const auto& [o, n] : mapping.pairs) {
            if (!o.is_point()) olds.push_back(o);
            if (!n.is_point()) news.push_back(n);
        }
        if (olds != positive_spans(area.intervals)) return fail("mapping drifted from shifted area at " + std::to_string(k));
        const std::size_t nk = k - (range.end - range.start) + repl_size;
        if (without_spans(old_index.at(k).text, olds) != without_spans(new_index.at(nk).text, news)) {
            return fail("outside text differs at version " + std::to_string(k));
        }
        if (k == original.changes.size()) return true;
        advance_mapping(mapping, original.changes[k]);
        area = shift_area_through(area, original.changes[k]);
    }
}

/// Valid but non-canonical bytes for `history`: shuffled and padded header
/// keys, optional ASCII escaping, spacing, CRLF, blank lines and cursor events.
inline std::string fuzzed_cast(std::mt19937_64& rng, const EditHistory& history) {
    using ojson = nlohmann::ordered_json;
    const bool ascii = rng() % 2;
    const bool crlf = rng() % 3 == 0;
    const std::string eol = crlf ? "\r\n" : "\n";
    auto dump = [&](const ojson& v) {
        std::string s = v.dump(-1, ' ', ascii);
        if (rng() % 2) {
            std::string spaced;
            bool in_string = false;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
                spaced.push_back(s[i]);
                if (!in_string && (s[i] == ',' || s[i] == ':')) spaced.push_back(' ');
            }
            s = spaced;
        }
        return s;
    };

    std::vector<std::pair<std::string, ojson>> fields = {{"textcast", 1}, {"initial", to_utf8(history.initial_text)}};
    if (rng() % 2) fields.push_back({"meta", ojson{{"title", "f\u00fcnf \u2603"}, {"creator", "x"}}});
    if (rng() % 2) fields.push_back({"x-app", ojson{{"v", rng() % 100}}});
    if (rng() % 2) fields.push_back({"zz", ojson::array({1, "\u00e9"})});
    std::shuffle(fields.begin(), fields.end(), rng);
    ojson header = ojson::object();
    for (auto& [k, v] : fields) header[k] = v;

    std::string out = dump(header) + eol;
    for (const auto& c : history.changes) {
        if (rng() % 5 == 0) out += eol;
        if (rng() % 4 == 0) out += dump(ojson::array({"cursor", c.pos, rng() % 3})) + eol;
        out += dump(ojson::array({c.t_ms, c.pos, to_utf8(c.deleted), to_utf8(c.inserted)})) + eol;
    }
    if (rng() % 2) out += eol;
    return out;
}

}  // namespace textcast::testing
