#include "textcast/area.hpp"

#include "textcast/error.hpp"

#include <algorithm>
#include <string>

namespace textcast {

namespace {

std::string describe(const AreaInterval& iv) {
    if (iv.is_point()) return "point " + std::to_string(iv.start);
    return "[" + std::to_string(iv.start) + ", " + std::to_string(iv.end) + ")";
}

std::size_t shifted(std::size_t x, std::ptrdiff_t delta) {
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(x) + delta);
}

bool reaches_into(const AreaInterval& iv, const Footprint& fp) {
    if (!fp.is_caret()) {
        if (!iv.is_point()) return std::max(iv.start, fp.start) < std::min(iv.end, fp.end);
        return fp.start < iv.start && iv.start < fp.end;
    }
    if (!iv.is_point()) return iv.start < fp.start && fp.start < iv.end;
    return fp.start == iv.start;
}

void check_bounds(const EffectiveArea& area, const TextChange& change) {
    if (change.pos > area.doc_length || change.deleted.size() > area.doc_length - change.pos) {
        throw Error(ErrorCode::OffsetOutOfBounds,
                    "change at " + std::to_string(change.pos) + " exceeds document length " +
                        std::to_string(area.doc_length),
                    change.seq);
    }
}

}  // namespace

std::string_view to_string(FootprintKind kind) noexcept {
    switch (kind) {
    case FootprintKind::DeletionSpan: return "deletion-span";
    case FootprintKind::InsertionCaret: return "insertion-caret";
    case FootprintKind::ReplacementSpan: return "replacement-span";
    }
    return "unknown";
}

std::size_t EffectiveArea::total_width() const noexcept {
    std::size_t w = 0;
    for (const auto& iv : intervals) w += iv.width();
    return w;
}

std::ptrdiff_t PositionMapping::delta_after(std::size_t i) const {
    const auto& [old_iv, new_iv] = pairs.at(i);
    return static_cast<std::ptrdiff_t>(new_iv.end) - static_cast<std::ptrdiff_t>(old_iv.end);
}

Footprint footprint(const TextChange& change) noexcept {
    Footprint fp{change.pos, change.pos + change.deleted.size(), FootprintKind::InsertionCaret};
    if (!change.deleted.empty()) {
        fp.kind = change.inserted.empty() ? FootprintKind::DeletionSpan : FootprintKind::ReplacementSpan;
    }
    return fp;
}

std::optional<AreaInterval> interior_intersects(const EffectiveArea& area, const Footprint& fp) {
    for (const auto& iv : area.intervals) {
        if (iv.start > fp.end) break;
        if (reaches_into(iv, fp)) return iv;
    }
    return std::nullopt;
}

EffectiveArea shift_area_through(const EffectiveArea& area, const TextChange& change) {
    check_bounds(area, change);
    const Footprint fp = footprint(change);
    if (auto hit = interior_intersects(area, fp)) {
        throw Error(ErrorCode::InteriorIntersection,
                    "change at " + std::to_string(change.pos) + " reaches into " + describe(*hit), change.seq);
    }
    const std::ptrdiff_t delta = change.delta();
    const std::size_t p = change.pos;
    EffectiveArea out{area.frame_version + 1, shifted(area.doc_length, delta), {}};
    out.intervals.reserve(area.intervals.size());
    for (auto iv : area.intervals) {
        if (fp.is_caret() && !iv.is_point()) {
            // Text typed at a region's start goes in front of it.
            if (iv.start >= p) iv.start = shifted(iv.start, delta);
        } else if (iv.start > p) {
            iv.start = shifted(iv.start, delta);
        }
        if (iv.end > p) iv.end = shifted(iv.end, delta);
        if (iv.is_point() && !out.intervals.empty() && out.intervals.back() == iv) continue;
        out.intervals.push_back(iv);
    }
    return out;
}

std::vector<AreaInterval> normalize(std::vector<AreaInterval> intervals) {
    std::sort(intervals.begin(), intervals.end());
    std::vector<AreaInterval> out;
    out.reserve(intervals.size());
    for (const auto& iv : intervals) {
        if (!out.empty() && iv.start <= out.back().end) {
            out.back().end = std::max(out.back().end, iv.end);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

EffectiveArea absorb_change(const EffectiveArea& area, const TextChange& change) {
    check_bounds(area, change);
    const std::size_t p = change.pos;
    const std::size_t del_end = p + change.deleted.size();
    const std::size_t ins = change.inserted.size();
    auto move = [&](std::size_t x) {
        if (x > p) x = x < del_end ? p : x - change.deleted.size();
        return x > p ? x + ins : x;
    };
    std::vector<AreaInterval> next;
    next.reserve(area.intervals.size() + 1);
    for (const auto& iv : area.intervals) next.push_back({move(iv.start), move(iv.end)});
    next.push_back({p, p + ins});
    return EffectiveArea{area.frame_version + 1, shifted(area.doc_length, change.delta()),
                         normalize(std::move(next))};
}

std::size_t map_position(const PositionMapping& mapping, std::size_t pos, Side side) {
    auto unmappable = [&](const AreaInterval& iv) {
        return Error(ErrorCode::UnmappablePosition,
                     "position " + std::to_string(pos) + " lies inside " + describe(iv));
    };
    const auto& pairs = mapping.pairs;
    if (side == Side::Before) {
        for (const auto& [old_iv, new_iv] : pairs) {
            if (old_iv.end < pos) continue;
            if (pos < old_iv.start) return pos - old_iv.start + new_iv.start;
            if (pos == old_iv.start) return new_iv.start;
            if (pos < old_iv.end) throw unmappable(old_iv);
            return new_iv.end;
        }
    } else {
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
            const auto& [old_iv, new_iv] = *it;
            if (old_iv.start > pos) continue;
            if (pos >= old_iv.end) return pos - old_iv.end + new_iv.end;
            if (pos == old_iv.start) return new_iv.start;
            throw unmappable(old_iv);
        }
        return pos;
    }
    if (pairs.empty()) return pos;
    const auto& [old_iv, new_iv] = pairs.back();
    return pos - old_iv.end + new_iv.end;
}

PositionMapping build_mapping(const EffectiveArea& old_area, const EffectiveArea& new_area) {
    auto mismatch = [](const std::string& what) {
        return Error(ErrorCode::MappingShapeMismatch, "areas do not line up: " + what);
    };
    const auto& olds = old_area.intervals;
    const auto& news = new_area.intervals;
    if (olds.size() != news.size()) {
        throw mismatch(std::to_string(olds.size()) + " vs " + std::to_string(news.size()) + " intervals");
    }
    std::size_t old_prev = 0;
    std::size_t new_prev = 0;
    PositionMapping mapping;
    mapping.pairs.reserve(olds.size());
    for (std::size_t k = 0; k < olds.size(); ++k) {
        if (olds[k].start - old_prev != news[k].start - new_prev) {
            throw mismatch("gap before interval " + std::to_string(k) + " differs");
        }
        mapping.pairs.emplace_back(olds[k], news[k]);
        old_prev = olds[k].end;
        new_prev = news[k].end;
    }
    if (old_area.doc_length < old_prev || new_area.doc_length < new_prev ||
        old_area.doc_length - old_prev != new_area.doc_length - new_prev) {
        throw mismatch("trailing text differs in length");
    }
    return mapping;
}

void advance_mapping(PositionMapping& mapping, const TextChange& old_frame_change) {
    const Footprint fp = footprint(old_frame_change);
    const std::ptrdiff_t delta = old_frame_change.delta();
    for (auto& [old_iv, new_iv] : mapping.pairs) {
        if (reaches_into(old_iv, fp)) {
            throw Error(ErrorCode::InteriorIntersection,
                        "change at " + std::to_string(fp.start) + " reaches into " + describe(old_iv),
                        old_frame_change.seq);
        }
        if (fp.end <= old_iv.start) {
            old_iv = {shifted(old_iv.start, delta), shifted(old_iv.end, delta)};
            new_iv = {shifted(new_iv.start, delta), shifted(new_iv.end, delta)};
        }
    }
}

}  // namespace textcast
