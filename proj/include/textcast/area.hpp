#pragma once

#include "textcast/history.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace textcast {

enum class FootprintKind { DeletionSpan, InsertionCaret, ReplacementSpan };

std::string_view to_string(FootprintKind kind) noexcept;

/// The span a change occupies in the version it applies to.
/// Pure insertions are zero-width carets.
struct Footprint {
    std::size_t start = 0;
    std::size_t end = 0;
    FootprintKind kind = FootprintKind::InsertionCaret;

    bool is_caret() const noexcept { return start == end; }
    bool operator==(const Footprint&) const = default;
};

/// Half-open interval. A zero-width interval is a collapse point: a spot where
/// the range removed text without leaving any of its own behind.
struct AreaInterval {
    std::size_t start = 0;
    std::size_t end = 0;

    bool is_point() const noexcept { return start == end; }
    std::size_t width() const noexcept { return end - start; }

    auto operator<=>(const AreaInterval&) const = default;
};

/// Touched intervals expressed in the coordinates of one version.
///
/// Intervals are sorted by (start, end) and never overlap in their interiors.
/// `absorb_change` additionally merges touching intervals so that each
/// contiguous region is one interval; `shift_area_through` leaves regions that
/// become adjacent separate because their relative order still matters.
struct EffectiveArea {
    std::size_t frame_version = 0;
    std::size_t doc_length = 0;
    std::vector<AreaInterval> intervals;

    bool empty() const noexcept { return intervals.empty(); }
    std::size_t total_width() const noexcept;

    bool operator==(const EffectiveArea&) const = default;
};

enum class Side { Before, After };

/// Correspondence between two frames that differ only inside paired
/// intervals. Text between consecutive intervals (and before the first and
/// after the last) is identical on both sides.
struct PositionMapping {
    std::vector<std::pair<AreaInterval, AreaInterval>> pairs;

    /// Offset shift applied to positions after pair `i`.
    std::ptrdiff_t delta_after(std::size_t i) const;
    bool operator==(const PositionMapping&) const = default;
};

Footprint footprint(const TextChange& change) noexcept;

/// First interval the footprint reaches into, using the boundary-exclusive
/// rules: spans conflict on positive overlap or when they strictly contain a
/// collapse point; carets conflict strictly inside a span or exactly on a
/// collapse point.
std::optional<AreaInterval> interior_intersects(const EffectiveArea& area, const Footprint& fp);

/// Moves the area across a change that does not touch it. A caret insertion
/// at an interval's start lands before the interval; at its end, after it.
/// Throws InteriorIntersection if the change reaches into the area.
EffectiveArea shift_area_through(const EffectiveArea& area, const TextChange& change);

/// Folds a change into the area: deleted portions collapse, the inserted text
/// (or a collapse point, for pure deletions) joins the area, and touching
/// intervals merge. Throws OffsetOutOfBounds if the change exceeds doc_length.
EffectiveArea absorb_change(const EffectiveArea& area, const TextChange& change);

/// Sorts and merges overlapping or touching intervals.
std::vector<AreaInterval> normalize(std::vector<AreaInterval> intervals);

/// Maps a position outside the old intervals (or on a boundary) to the new
/// frame. On a collapse point, `side` chooses the new interval's start
/// (Before) or end (After). Throws UnmappablePosition strictly inside.
std::size_t map_position(const PositionMapping& mapping, std::size_t pos, Side side);

/// Zips two areas whose complements hold identical text.
/// Throws MappingShapeMismatch when counts or gap lengths disagree.
PositionMapping build_mapping(const EffectiveArea& old_area, const EffectiveArea& new_area);

/// Moves both frames of the mapping across a change expressed in the old
/// frame that touches no old interval. Pairs the change precedes shift by its
/// delta on both sides. Throws InteriorIntersection otherwise.
void advance_mapping(PositionMapping& mapping, const TextChange& old_frame_change);

}  // namespace textcast
