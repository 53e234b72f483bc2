#pragma once

#include "textcast/history.hpp"
#include "textcast/rewrite.hpp"

#include <cstddef>
#include <cstdint>

namespace textcast {

/// Inclusive window on the recording clock.
struct TimeWindow {
    std::uint64_t t0_ms = 0;
    std::uint64_t t1_ms = 0;
};

/// A text selection [start, end) made while viewing `version`.
struct TextSpan {
    std::size_t version = 0;
    std::size_t start = 0;
    std::size_t end = 0;
};

/// Timeline selection: every change with t0 <= t_ms <= t1.
/// Throws EmptySelection when the window holds no change.
HistoryRange select_by_time(const EditHistory& history, const TimeWindow& window);

/// Text selection: walks backward from span.version, tracking the span's image
/// in each earlier version, and collects the changes whose output lands inside
/// it. Returns the hull [first collected, last collected + 1).
/// Throws SpanOutOfBounds or EmptySelection.
HistoryRange select_by_text(const EditHistory& history, const TextSpan& span);

/// Gesture-time feedback; same answer as validate_rewrite.
ValidationReport selection_validity(const EditHistory& history, const HistoryRange& range);

}  // namespace textcast
