#pragma once

#include "textcast/area.hpp"
#include "textcast/history.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace textcast {

/// Changes [start, end) of a history. Never empty.
struct HistoryRange {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const HistoryRange&) const = default;
};

/// Throws EmptyRange or RangeOutOfBounds.
void check_range(const EditHistory& history, const HistoryRange& range);

/// What a range consumed (pre_image, at version `start`) and what it left
/// behind (post_image, at version `end`).
struct RangeArea {
    EffectiveArea pre_image;
    EffectiveArea post_image;
};

struct Conflict {
    std::size_t seq = 0;
    Footprint footprint;
    AreaInterval interval;
    std::size_t frame_version = 0;

    bool operator==(const Conflict&) const = default;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Conflict> conflicts;
};

/// New edits for a range, positioned against the text at range start.
/// Timestamps are relative, starting at 0.
struct Replacement {
    std::vector<TextChange> changes;
};

struct ReplacementViolation {
    std::size_t repl_seq = 0;
    Footprint footprint;

    bool operator==(const ReplacementViolation&) const = default;
};

struct RewriteResult {
    EditHistory history;
    /// Old frame `end` to new frame `start + |replacement|`.
    PositionMapping mapping;
    ValidationReport report;
};

RangeArea compute_range_area(const EditHistory& history, const HistoryRange& range);

/// Walks the changes after the range with the range's post-image and reports
/// every change that lands inside it. After a conflict the offending change is
/// absorbed into the area, so anything built on top of it is reported as well.
ValidationReport validate_rewrite(const EditHistory& history, const HistoryRange& range);

/// The part of the text at range start that a replacement may edit.
EffectiveArea editable_region(const EditHistory& history, const HistoryRange& range);

/// Replays `repl` over `base_text` and reports each change that leaves the
/// editable region. Edits may touch region boundaries and type into
/// collapse points. Throws OffsetOutOfBounds / DeletedTextMismatch from replay.
std::vector<ReplacementViolation> check_replacement(TextView base_text, const EffectiveArea& editable,
                                                    const Replacement& repl);

/// Affine map of the replacement's timestamps onto [t_lo, t_hi], floored.
Replacement rescale_timestamps(const Replacement& repl, std::uint64_t t_lo, std::uint64_t t_hi);

/// Replaces the range with `repl` and rebases every later change.
/// Throws AmbiguousRange, ReplacementEscapesRegion or MappingShapeMismatch;
/// the input is never modified.
RewriteResult substitute(const EditHistory& history, const HistoryRange& range, const Replacement& repl);

/// The range's own changes re-expressed as a replacement (t_ms relative to the
/// first). Substituting this is an identity rewrite.
Replacement replacement_from_range(const EditHistory& history, const HistoryRange& range);

}  // namespace textcast
