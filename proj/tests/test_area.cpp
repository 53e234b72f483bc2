#include "oracle/identity_oracle.hpp"
#include "support.hpp"

#include "textcast/area.hpp"
#include "textcast/error.hpp"

#include <doctest.h>

#include <set>

using namespace textcast;
using namespace textcast::testing;

namespace {

EffectiveArea area(std::size_t doc_length, std::vector<AreaInterval> ivs, std::size_t frame = 0) {
    return EffectiveArea{frame, doc_length, std::move(ivs)};
}

using IV = AreaInterval;

bool canonical(const std::vector<AreaInterval>& ivs, bool allow_touching) {
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (ivs[i].end < ivs[i].start) return false;
        if (i == 0) continue;
        const auto& a = ivs[i - 1];
        const auto& b = ivs[i];
        if (allow_touching ? b.start < a.end || (a.is_point() && b.is_point() && a == b)
                           : b.start <= a.end) {
            return false;
        }
        if (b.start < a.start) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("area") {

TEST_CASE("footprint") {
    CHECK(footprint(make_insert(3, T("ab"))) == Footprint{3, 3, FootprintKind::InsertionCaret});
    CHECK(footprint(make_delete(7, T("xyz"))) == Footprint{7, 10, FootprintKind::DeletionSpan});
    CHECK(footprint(make_replace(2, T("q"), T("Q"))) == Footprint{2, 3, FootprintKind::ReplacementSpan});
}

TEST_CASE("interior_intersects follows the boundary-exclusive rules") {
    CHECK_FALSE(interior_intersects(area(30, {{19, 25}}), Footprint{4, 10, FootprintKind::DeletionSpan}));
    CHECK(interior_intersects(area(30, {{10, 10}}), Footprint{10, 10}) == IV{10, 10});
    CHECK_FALSE(interior_intersects(area(30, {}), Footprint{0, 30, FootprintKind::DeletionSpan}));

    // (a) span vs span: only positive overlap counts
    CHECK(interior_intersects(area(30, {{5, 9}}), Footprint{8, 12, FootprintKind::DeletionSpan}));
    CHECK_FALSE(interior_intersects(area(30, {{5, 9}}), Footprint{9, 12, FootprintKind::DeletionSpan}));
    CHECK_FALSE(interior_intersects(area(30, {{5, 9}}), Footprint{1, 5, FootprintKind::ReplacementSpan}));
    // (b) span vs collapse point: strictly inside only
    CHECK(interior_intersects(area(30, {{6, 6}}), Footprint{5, 7, FootprintKind::DeletionSpan}));
    CHECK_FALSE(interior_intersects(area(30, {{5, 5}}), Footprint{5, 7, FootprintKind::DeletionSpan}));
    CHECK_FALSE(interior_intersects(area(30, {{7, 7}}), Footprint{5, 7, FootprintKind::DeletionSpan}));
    // (c) caret vs span: strictly inside only
    CHECK(interior_intersects(area(30, {{5, 9}}), Footprint{6, 6}));
    CHECK_FALSE(interior_intersects(area(30, {{5, 9}}), Footprint{5, 5}));
    CHECK_FALSE(interior_intersects(area(30, {{5, 9}}), Footprint{9, 9}));
    // (d) caret vs collapse point: exact hit
    CHECK_FALSE(interior_intersects(area(30, {{5, 5}}), Footprint{6, 6}));

    CHECK(interior_intersects(area(30, {{1, 2}, {4, 4}, {8, 9}}), Footprint{4, 4}) == IV{4, 4});
}

TEST_CASE("shift_area_through") {
    CHECK(shift_area_through(area(25, {{19, 25}}, 2), make_delete(4, T("quick "))) == area(19, {{13, 19}}, 3));
    CHECK(shift_area_through(area(9, {{2, 5}}), make_insert(9, T("zz"))).intervals == std::vector<IV>{{2, 5}});
    CHECK(shift_area_through(area(20, {{10, 10}}), make_insert(12, T("ab"))).intervals == std::vector<IV>{{10, 10}});
    CHECK_THROWS_AS(shift_area_through(area(20, {{10, 10}}), make_insert(10, T("ab"))), Error);
    CHECK_THROWS_AS(shift_area_through(area(20, {{10, 14}}), make_delete(12, T("xxxx"))), Error);

    // typing at a region's start lands before it, at its end after it
    CHECK(shift_area_through(area(10, {{5, 8}}), make_insert(5, T("ab"))).intervals == std::vector<IV>{{7, 10}});
    CHECK(shift_area_through(area(10, {{5, 8}}), make_insert(8, T("ab"))).intervals == std::vector<IV>{{5, 8}});
    // deletions abutting a region move only what follows them
    CHECK(shift_area_through(area(10, {{5, 8}}), make_delete(2, T("xxx"))).intervals == std::vector<IV>{{2, 5}});
    CHECK(shift_area_through(area(10, {{5, 8}}), make_delete(8, T("xx"))).intervals == std::vector<IV>{{5, 8}});
    // a replacement next to a collapse point keeps the point on its side
    CHECK(shift_area_through(area(10, {{4, 4}, {6, 6}}), make_replace(4, T("xy"), T("PQR"))).intervals ==
          std::vector<IV>{{4, 4}, {7, 7}});
    // regions that end up adjacent stay distinct
    CHECK(shift_area_through(area(10, {{2, 4}, {6, 8}}), make_delete(4, T("xx"))).intervals ==
          std::vector<IV>{{2, 4}, {4, 6}});
}

TEST_CASE("absorb_change") {
    CHECK(absorb_change(area(19, {}, 1), make_insert(19, T(" jumps"))) == area(25, {{19, 25}}, 2));
    CHECK(absorb_change(area(20, {{10, 16}}), make_delete(10, T("xxxxxx"))).intervals == std::vector<IV>{{10, 10}});
    CHECK(absorb_change(area(10, {{5, 8}}), make_insert(6, T("AB"))).intervals == std::vector<IV>{{5, 10}});
    // deleting the text between two regions fuses them
    CHECK(absorb_change(area(10, {{2, 4}, {6, 8}}), make_delete(4, T("xx"))).intervals == std::vector<IV>{{2, 6}});
    // a collapse point touching a span is absorbed
    CHECK(absorb_change(area(10, {{2, 4}}), make_delete(4, T("x"))).intervals == std::vector<IV>{{2, 4}});
    CHECK_THROWS_AS(absorb_change(area(3, {}), make_delete(2, T("xx"))), Error);
}

TEST_CASE("normalization closure and width accounting") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t len = rng() % 14;
        std::vector<IV> raw;
        for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) {
            const std::size_t a = rng() % (len + 1);
            raw.push_back({a, a + rng() % (len - a + 1)});
        }
        const EffectiveArea before = area(len, normalize(raw));
        REQUIRE(canonical(before.intervals, false));

        const Text doc(len, U'x');
        const TextChange c = random_change(rng, doc, 16, T("xy"));
        const EffectiveArea after = absorb_change(before, c);
        CHECK(canonical(after.intervals, false));
        CHECK(after.doc_length == len + c.inserted.size() - c.deleted.size());

        std::size_t consumed = 0;
        for (const auto& iv : before.intervals) {
            const std::size_t lo = std::max(iv.start, c.pos);
            const std::size_t hi = std::min(iv.end, c.pos + c.deleted.size());
            if (hi > lo) consumed += hi - lo;
        }
        CHECK(after.total_width() == before.total_width() - consumed + c.inserted.size());

        if (!interior_intersects(before, footprint(c))) {
            const EffectiveArea shifted = shift_area_through(before, c);
            CHECK(canonical(shifted.intervals, true));
            CHECK(shifted.total_width() == before.total_width());
        }
    }
}

TEST_CASE("map_position") {
    CHECK(map_position(PositionMapping{}, 30, Side::Before) == 30);
    CHECK(map_position(PositionMapping{}, 30, Side::After) == 30);
    const PositionMapping m{{{IV{10, 16}, IV{10, 10}}}};
    CHECK(map_position(m, 20, Side::After) == 14);
    CHECK(map_position(m, 20, Side::Before) == 14);
    CHECK(map_position(m, 3, Side::Before) == 3);
    CHECK(map_position(m, 10, Side::Before) == 10);
    CHECK(map_position(m, 16, Side::After) == 10);
    CHECK_THROWS_AS(map_position(m, 12, Side::After), Error);

    const PositionMapping point{{{IV{4, 4}, IV{4, 9}}}};
    CHECK(map_position(point, 4, Side::Before) == 4);
    CHECK(map_position(point, 4, Side::After) == 9);
    CHECK(map_position(point, 6, Side::After) == 11);
}

TEST_CASE("build_mapping") {
    const PositionMapping same = build_mapping(area(25, {{19, 25}}), area(25, {{19, 25}}));
    REQUIRE(same.pairs.size() == 1);
    CHECK(same.delta_after(0) == 0);

    const PositionMapping grown = build_mapping(area(25, {{19, 25}}), area(26, {{19, 26}}));
    REQUIRE(grown.pairs.size() == 1);
    CHECK(grown.delta_after(0) == 1);

    CHECK_THROWS_AS(build_mapping(area(12, {{3, 4}, {9, 12}}), area(9, {{3, 3}})), Error);
    CHECK_THROWS_AS(build_mapping(area(12, {{3, 4}}), area(12, {{2, 3}})), Error);
    CHECK_THROWS_AS(build_mapping(area(12, {{3, 4}}), area(14, {{3, 5}})), Error);
}

TEST_CASE("map_position is monotone and bijective on complements (every position, docs <= 12)") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 4000; ++trial) {
        // random old area on a doc <= 12, new area with identical gaps
        const std::size_t old_len = rng() % 13;
        std::vector<IV> olds, news;
        std::size_t pos = 0, new_pos = 0;
        while (pos <= old_len) {
            const std::size_t gap = (olds.empty() ? 0 : 1) + rng() % 3;
            if (pos + gap > old_len) break;
            const std::size_t width = rng() % (old_len - pos - gap + 1);
            const std::size_t new_width = rng() % 4;
            olds.push_back({pos + gap, pos + gap + width});
            news.push_back({new_pos + gap, new_pos + gap + new_width});
            pos = olds.back().end;
            new_pos = news.back().end;
            if (rng() % 3 == 0) break;
        }
        const std::size_t tail = old_len - pos;
        const EffectiveArea old_area = area(old_len, olds);
        const EffectiveArea new_area = area(new_pos + tail, news);
        const PositionMapping m = build_mapping(old_area, new_area);

        auto inside = [](const std::vector<IV>& ivs, std::size_t x) {
            for (const auto& iv : ivs) {
                if (iv.start < x && x < iv.end) return true;
            }
            return false;
        };
        auto covered = [](const std::vector<IV>& ivs, std::size_t x) {
            for (const auto& iv : ivs) {
                if (iv.start <= x && x < iv.end) return true;
            }
            return false;
        };
        for (Side side : {Side::Before, Side::After}) {
            std::optional<std::size_t> prev;
            for (std::size_t x = 0; x <= old_len; ++x) {
                if (inside(olds, x)) {
                    CHECK_THROWS_AS(map_position(m, x, side), Error);
                    continue;
                }
                const std::size_t y = map_position(m, x, side);
                if (prev) CHECK(*prev <= y);
                prev = y;
            }
        }
        // a character sits just after its offset, so it maps like a caret that follows earlier edits
        std::set<std::size_t> image, expected;
        for (std::size_t x = 0; x < old_len; ++x) {
            if (!covered(olds, x)) image.insert(map_position(m, x, Side::After));
        }
        for (std::size_t y = 0; y < new_area.doc_length; ++y) {
            if (!covered(news, y)) expected.insert(y);
        }
        CHECK(image == expected);
    }
}

TEST_CASE("range areas agree with per-character identity tracking") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 3000; ++trial) {
        const EditHistory h = random_history(rng, 1 + rng() % 8, 12, T("abc"));
        const std::size_t s = rng() % h.size();
        const std::size_t e = s + 1 + rng() % (h.size() - s);
        const RangeArea got = compute_range_area(h, {s, e});
        const oracle::SlotAreas want = oracle::range_slots(h, {s, e});
        INFO("trial " << trial << " range " << s << ":" << e);
        CHECK(got.pre_image.intervals == want.pre);
        CHECK(got.post_image.intervals == want.post);
        CHECK(got.pre_image.frame_version == s);
        CHECK(got.post_image.frame_version == e);
    }
}

}
