#pragma once

#include "textcast/unicode.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace textcast {

/// One atomic character-level edit: at `pos`, remove `deleted` and put
/// `inserted` in its place. Offsets are in the coordinates of the version the
/// change applies to.
struct TextChange {
    std::size_t seq = 0;
    std::uint64_t t_ms = 0;
    std::size_t pos = 0;
    Text deleted;
    Text inserted;

    bool is_noop() const noexcept { return deleted.empty() && inserted.empty(); }
    std::ptrdiff_t delta() const noexcept {
        return static_cast<std::ptrdiff_t>(inserted.size()) -
               static_cast<std::ptrdiff_t>(deleted.size());
    }

    bool operator==(const TextChange&) const = default;
};

TextChange make_insert(std::size_t pos, Text inserted, std::uint64_t t_ms = 0);
TextChange make_delete(std::size_t pos, Text deleted, std::uint64_t t_ms = 0);
TextChange make_replace(std::size_t pos, Text deleted, Text inserted, std::uint64_t t_ms = 0);

struct HistoryMeta {
    std::optional<std::string> title;
    std::optional<std::string> creator;
    std::optional<std::string> created_at;

    bool operator==(const HistoryMeta&) const = default;
};

/// The screencast: an initial document plus the ordered change sequence.
/// Version v is the text after the first v changes.
struct EditHistory {
    Text initial_text;
    std::vector<TextChange> changes;
    HistoryMeta meta;

    std::size_t size() const noexcept { return changes.size(); }

    bool operator==(const EditHistory&) const = default;
};

struct Snapshot {
    std::size_t version = 0;
    Text text;
};

/// Renumbers seq to 0..n-1 in place order.
void renumber(std::vector<TextChange>& changes);

/// Splices `change` into `text`. Throws OffsetOutOfBounds when the deleted
/// span runs past the end, DeletedTextMismatch when the recorded text differs.
Text apply_change(TextView text, const TextChange& change);

/// In-place variant of apply_change used by replay loops.
void apply_change_in_place(Text& text, const TextChange& change);

TextChange invert(const TextChange& change);

/// Text of `version` by folding changes from the initial text.
/// Throws VersionOutOfRange, or CorruptHistory carrying the failing seq.
Snapshot materialize(const EditHistory& history, std::size_t version);

/// Lengths of every version, 0..n, from the length deltas alone (no replay).
std::vector<std::size_t> version_lengths(const EditHistory& history);

enum class ViolationKind { OffsetOutOfBounds, DeletedTextMismatch, TimestampOrder, NoOp, SequenceGap };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    std::size_t seq = 0;
    ViolationKind kind{};

    bool operator==(const Violation&) const = default;
};

/// All integrity problems in index order. Replay-related checks stop at the
/// first replay failure since later versions are undefined from there on.
std::vector<Violation> replay_validate(const EditHistory& history);

std::uint64_t duration_ms(const EditHistory& history) noexcept;

/// Materialization with cached checkpoints. Immutable after construction and
/// safe to share between threads. Construction replays the whole history and
/// throws CorruptHistory on the first invalid change.
class SnapshotIndex {
public:
    static constexpr std::size_t default_interval = 256;

    explicit SnapshotIndex(const EditHistory& history,
                           std::size_t checkpoint_interval = default_interval);

    std::size_t versions() const noexcept { return changes_.size() + 1; }
    Snapshot at(std::size_t version) const;
    const Text& final_text() const noexcept { return final_; }

private:
    std::vector<TextChange> changes_;
    std::size_t interval_;
    std::vector<Text> checkpoints_;
    Text final_;
};

}  // namespace textcast
