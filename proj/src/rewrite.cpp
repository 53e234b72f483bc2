#include "textcast/rewrite.hpp"

#include "textcast/error.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace textcast {

void check_range(const EditHistory& history, const HistoryRange& range) {
    if (range.start >= range.end) {
        if (range.start == range.end) {
            throw Error(ErrorCode::EmptyRange, "range " + std::to_string(range.start) + ":" +
                                                   std::to_string(range.end) + " selects no changes");
        }
        throw Error(ErrorCode::RangeOutOfBounds, "range start " + std::to_string(range.start) +
                                                     " is after its end " + std::to_string(range.end));
    }
    if (range.end > history.changes.size()) {
        throw Error(ErrorCode::RangeOutOfBounds, "range end " + std::to_string(range.end) +
                                                     " exceeds change count " +
                                                     std::to_string(history.changes.size()));
    }
}

RangeArea compute_range_area(const EditHistory& history, const HistoryRange& range) {
    check_range(history, range);
    const auto lengths = version_lengths(history);

    EffectiveArea post{range.start, lengths[range.start], {}};
    for (std::size_t k = range.start; k < range.end; ++k) post = absorb_change(post, history.changes[k]);

    EffectiveArea pre{range.end, lengths[range.end], {}};
    for (std::size_t k = range.end; k-- > range.start;) pre = absorb_change(pre, invert(history.changes[k]));
    pre.frame_version = range.start;

    return RangeArea{std::move(pre), std::move(post)};
}

ValidationReport validate_rewrite(const EditHistory& history, const HistoryRange& range) {
    ValidationReport report;
    EffectiveArea area = compute_range_area(history, range).post_image;
    for (std::size_t k = range.end; k < history.changes.size(); ++k) {
        const auto& change = history.changes[k];
        const Footprint fp = footprint(change);
        if (auto hit = interior_intersects(area, fp)) {
            report.conflicts.push_back(Conflict{k, fp, *hit, area.frame_version});
            area = absorb_change(area, change);
        } else {
            area = shift_area_through(area, change);
        }
    }
    report.ok = report.conflicts.empty();
    return report;
}

EffectiveArea editable_region(const EditHistory& history, const HistoryRange& range) {
    return compute_range_area(history, range).pre_image;
}

std::vector<ReplacementViolation> check_replacement(TextView base_text, const EffectiveArea& editable,
                                                    const Replacement& repl) {
    std::vector<ReplacementViolation> violations;
    Text text(base_text);
    EffectiveArea region = editable;
    region.doc_length = text.size();
    for (std::size_t j = 0; j < repl.changes.size(); ++j) {
        TextChange change = repl.changes[j];
        change.seq = j;
        apply_change_in_place(text, change);
        const Footprint fp = footprint(change);
        const bool inside = std::any_of(region.intervals.begin(), region.intervals.end(), [&](const AreaInterval& iv) {
            return iv.start <= fp.start && fp.end <= iv.end;
        });
        if (!inside) violations.push_back({j, fp});
        region = absorb_change(region, change);
    }
    return violations;
}

Replacement rescale_timestamps(const Replacement& repl, std::uint64_t t_lo, std::uint64_t t_hi) {
    Replacement out = repl;
    if (out.changes.empty()) return out;
    const std::uint64_t first = repl.changes.front().t_ms;
    const std::uint64_t span = repl.changes.back().t_ms - first;
    for (auto& c : out.changes) {
        if (span == 0 || t_hi <= t_lo) {
            c.t_ms = t_lo;
            continue;
        }
        __extension__ using wide = unsigned __int128;
        const wide scaled = static_cast<wide>(c.t_ms - first) * (t_hi - t_lo) / span;
        c.t_ms = t_lo + static_cast<std::uint64_t>(scaled);
    }
    return out;
}

Replacement replacement_from_range(const EditHistory& history, const HistoryRange& range) {
    check_range(history, range);
    Replacement repl;
    const std::uint64_t t0 = history.changes[range.start].t_ms;
    for (std::size_t k = range.start; k < range.end; ++k) {
        TextChange c = history.changes[k];
        c.t_ms -= t0;
        repl.changes.push_back(std::move(c));
    }
    renumber(repl.changes);
    return repl;
}

namespace {

void check_replacement_shape(const Replacement& repl) {
    for (std::size_t j = 0; j < repl.changes.size(); ++j) {
        const auto& c = repl.changes[j];
        if (c.is_noop()) {
            throw Error(ErrorCode::NoOpChange, "replacement change " + std::to_string(j) + " is empty", j);
        }
        if (j > 0 && c.t_ms < repl.changes[j - 1].t_ms) {
            throw Error(ErrorCode::TimestampOrder,
                        "replacement change " + std::to_string(j) + " goes back in time", j);
        }
    }
}

bool on_interval_end(const PositionMapping& mapping, std::size_t pos) {
    return std::any_of(mapping.pairs.begin(), mapping.pairs.end(),
                       [pos](const auto& pair) { return pair.first.end == pos; });
}

}  // namespace

RewriteResult substitute(const EditHistory& history, const HistoryRange& range, const Replacement& repl) {
    check_range(history, range);
    check_replacement_shape(repl);

    ValidationReport report = validate_rewrite(history, range);
    if (!report.ok) {
        std::string seqs;
        for (const auto& c : report.conflicts) seqs += (seqs.empty() ? "" : ", ") + std::to_string(c.seq);
        throw Error(ErrorCode::AmbiguousRange, "rewriting " + std::to_string(range.start) + ":" +
                                                   std::to_string(range.end) +
                                                   " is ambiguous for later changes " + seqs,
                    report.conflicts.front().seq);
    }

    const RangeArea area = compute_range_area(history, range);
    const Text base = materialize(history, range.start).text;
    const auto escapes = check_replacement(base, area.pre_image, repl);
    if (!escapes.empty()) {
        throw Error(ErrorCode::ReplacementEscapesRegion,
                    "replacement change " + std::to_string(escapes.front().repl_seq) +
                        " edits outside the editable region",
                    escapes.front().repl_seq);
    }

    EffectiveArea rewritten = area.pre_image;
    for (const auto& c : repl.changes) rewritten = absorb_change(rewritten, c);
    PositionMapping mapping = build_mapping(area.post_image, rewritten);

    RewriteResult result;
    result.history.initial_text = history.initial_text;
    result.history.meta = history.meta;
    result.mapping = mapping;
    result.report = std::move(report);

    auto& out = result.history.changes;
    out.reserve(history.changes.size() - (range.end - range.start) + repl.changes.size());
    out.insert(out.end(), history.changes.begin(), history.changes.begin() + static_cast<std::ptrdiff_t>(range.start));

    const std::uint64_t t_lo = range.start == 0 ? 0 : history.changes[range.start - 1].t_ms;
    const std::uint64_t t_hi = history.changes[range.end - 1].t_ms;
    Replacement timed = rescale_timestamps(repl, t_lo, t_hi);
    out.insert(out.end(), timed.changes.begin(), timed.changes.end());

    for (std::size_t k = range.end; k < history.changes.size(); ++k) {
        const auto& c = history.changes[k];
        TextChange moved = c;
        moved.pos = map_position(mapping, c.pos, on_interval_end(mapping, c.pos) ? Side::After : Side::Before);
        advance_mapping(mapping, c);
        out.push_back(std::move(moved));
    }
    renumber(out);
    return result;
}

}  // namespace textcast
