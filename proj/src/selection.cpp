#include "textcast/selection.hpp"

#include "textcast/area.hpp"
#include "textcast/error.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace textcast {

HistoryRange select_by_time(const EditHistory& history, const TimeWindow& window) {
    const auto& cs = history.changes;
    auto first = std::lower_bound(cs.begin(), cs.end(), window.t0_ms,
                                  [](const TextChange& c, std::uint64_t t) { return c.t_ms < t; });
    auto last = std::upper_bound(cs.begin(), cs.end(), window.t1_ms,
                                 [](std::uint64_t t, const TextChange& c) { return t < c.t_ms; });
    if (window.t0_ms > window.t1_ms || first >= last) {
        throw Error(ErrorCode::EmptySelection, "no change between " + std::to_string(window.t0_ms) + "ms and " +
                                                   std::to_string(window.t1_ms) + "ms");
    }
    return HistoryRange{static_cast<std::size_t>(first - cs.begin()), static_cast<std::size_t>(last - cs.begin())};
}

HistoryRange select_by_text(const EditHistory& history, const TextSpan& span) {
    if (span.version > history.changes.size()) {
        throw Error(ErrorCode::SpanOutOfBounds, "version " + std::to_string(span.version) + " does not exist");
    }
    const auto lengths = version_lengths(history);
    if (span.start > span.end || span.end > lengths[span.version]) {
        throw Error(ErrorCode::SpanOutOfBounds, "span [" + std::to_string(span.start) + ", " +
                                                    std::to_string(span.end) + ") outside version " +
                                                    std::to_string(span.version));
    }

    // The image lives in the frame after change k while k is examined.
    AreaInterval image{span.start, span.end};
    std::optional<std::size_t> lo;
    std::optional<std::size_t> hi;
    for (std::size_t k = span.version; k-- > 0;) {
        const auto& c = history.changes[k];
        const std::size_t p = c.pos;
        const std::size_t ins_end = p + c.inserted.size();
        const std::size_t del = c.deleted.size();
        const Footprint output = footprint(invert(c));
        const EffectiveArea as_area{k + 1, lengths[k + 1], {image}};
        const bool touched = interior_intersects(as_area, output).has_value();

        auto back_start = [&](std::size_t x) {
            if (x < p) return x;
            if (x == p) return (touched || !c.inserted.empty()) ? p : p + del;
            if (x < ins_end) return p;
            return x - c.inserted.size() + del;
        };
        auto back_end = [&](std::size_t x) {
            if (x <= p) return x;
            if (x < ins_end) return p + del;
            return x - c.inserted.size() + del;
        };

        if (touched) {
            hi = hi.value_or(k);
            lo = k;
            image = {std::min(back_start(image.start), p), std::max(back_end(image.end), p + del)};
        } else if (image.is_point()) {
            const std::size_t q = image.start <= p ? image.start : back_end(image.start);
            image = {q, q};
        } else {
            image = {back_start(image.start), back_end(image.end)};
        }
    }
    if (!lo) {
        throw Error(ErrorCode::EmptySelection, "no change produced the selected text");
    }
    return HistoryRange{*lo, *hi + 1};
}

ValidationReport selection_validity(const EditHistory& history, const HistoryRange& range) {
    return validate_rewrite(history, range);
}

}  // namespace textcast
