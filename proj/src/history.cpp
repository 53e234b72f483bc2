#include "textcast/history.hpp"

#include "textcast/error.hpp"

#include <string>
#include <utility>

namespace textcast {

TextChange make_insert(std::size_t pos, Text inserted, std::uint64_t t_ms) {
    return TextChange{0, t_ms, pos, {}, std::move(inserted)};
}

TextChange make_delete(std::size_t pos, Text deleted, std::uint64_t t_ms) {
    return TextChange{0, t_ms, pos, std::move(deleted), {}};
}

TextChange make_replace(std::size_t pos, Text deleted, Text inserted, std::uint64_t t_ms) {
    return TextChange{0, t_ms, pos, std::move(deleted), std::move(inserted)};
}

void renumber(std::vector<TextChange>& changes) {
    for (std::size_t i = 0; i < changes.size(); ++i) changes[i].seq = i;
}

namespace {

void check_applicable(TextView text, const TextChange& change) {
    if (change.pos > text.size() || change.deleted.size() > text.size() - change.pos) {
        throw Error(ErrorCode::OffsetOutOfBounds,
                    "change " + std::to_string(change.seq) + " spans [" +
                        std::to_string(change.pos) + ", " +
                        std::to_string(change.pos + change.deleted.size()) +
                        ") past document length " + std::to_string(text.size()),
                    change.seq);
    }
    if (text.compare(change.pos, change.deleted.size(), change.deleted) != 0) {
        throw Error(ErrorCode::DeletedTextMismatch,
                    "change " + std::to_string(change.seq) + " deletes text that differs from the document at " +
                        std::to_string(change.pos),
                    change.seq);
    }
}

}  // namespace

Text apply_change(TextView text, const TextChange& change) {
    check_applicable(text, change);
    Text out;
    out.reserve(text.size() + change.inserted.size() - change.deleted.size());
    out.append(text.substr(0, change.pos));
    out.append(change.inserted);
    out.append(text.substr(change.pos + change.deleted.size()));
    return out;
}

void apply_change_in_place(Text& text, const TextChange& change) {
    check_applicable(text, change);
    text.replace(change.pos, change.deleted.size(), change.inserted);
}

TextChange invert(const TextChange& change) {
    TextChange out = change;
    std::swap(out.deleted, out.inserted);
    return out;
}

namespace {

[[noreturn]] void rethrow_corrupt(const Error& e, std::size_t seq) {
    throw Error(ErrorCode::CorruptHistory,
                "history is corrupt at change " + std::to_string(seq) + ": " + e.what(), seq);
}

}  // namespace

Snapshot materialize(const EditHistory& history, std::size_t version) {
    if (version > history.changes.size()) {
        throw Error(ErrorCode::VersionOutOfRange,
                    "version " + std::to_string(version) + " outside [0, " +
                        std::to_string(history.changes.size()) + "]");
    }
    Text text = history.initial_text;
    for (std::size_t k = 0; k < version; ++k) {
        try {
            apply_change_in_place(text, history.changes[k]);
        } catch (const Error& e) {
            rethrow_corrupt(e, k);
        }
    }
    return Snapshot{version, std::move(text)};
}

std::vector<std::size_t> version_lengths(const EditHistory& history) {
    std::vector<std::size_t> lengths;
    lengths.reserve(history.changes.size() + 1);
    std::size_t len = history.initial_text.size();
    lengths.push_back(len);
    for (const auto& c : history.changes) {
        len = len + c.inserted.size() - c.deleted.size();
        lengths.push_back(len);
    }
    return lengths;
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
    case ViolationKind::OffsetOutOfBounds: return "OffsetOutOfBounds";
    case ViolationKind::DeletedTextMismatch: return "DeletedTextMismatch";
    case ViolationKind::TimestampOrder: return "TimestampOrder";
    case ViolationKind::NoOp: return "NoOp";
    case ViolationKind::SequenceGap: return "SequenceGap";
    }
    return "Unknown";
}

std::vector<Violation> replay_validate(const EditHistory& history) {
    std::vector<Violation> out;
    Text text = history.initial_text;
    bool replayable = true;
    for (std::size_t k = 0; k < history.changes.size(); ++k) {
        const auto& c = history.changes[k];
        if (c.seq != k) out.push_back({k, ViolationKind::SequenceGap});
        if (c.is_noop()) out.push_back({k, ViolationKind::NoOp});
        if (k > 0 && c.t_ms < history.changes[k - 1].t_ms) out.push_back({k, ViolationKind::TimestampOrder});
        if (!replayable) continue;
        try {
            apply_change_in_place(text, c);
        } catch (const Error& e) {
            out.push_back({k, e.code() == ErrorCode::OffsetOutOfBounds ? ViolationKind::OffsetOutOfBounds
                                                                      : ViolationKind::DeletedTextMismatch});
            replayable = false;
        }
    }
    return out;
}

std::uint64_t duration_ms(const EditHistory& history) noexcept {
    return history.changes.empty() ? 0 : history.changes.back().t_ms;
}

SnapshotIndex::SnapshotIndex(const EditHistory& history, std::size_t checkpoint_interval)
    : changes_(history.changes), interval_(checkpoint_interval == 0 ? 1 : checkpoint_interval) {
    Text text = history.initial_text;
    checkpoints_.push_back(text);
    for (std::size_t k = 0; k < changes_.size(); ++k) {
        try {
            apply_change_in_place(text, changes_[k]);
        } catch (const Error& e) {
            rethrow_corrupt(e, k);
        }
        if ((k + 1) % interval_ == 0) checkpoints_.push_back(text);
    }
    final_ = std::move(text);
}

Snapshot SnapshotIndex::at(std::size_t version) const {
    if (version >= versions()) {
        throw Error(ErrorCode::VersionOutOfRange,
                    "version " + std::to_string(version) + " outside [0, " +
                        std::to_string(changes_.size()) + "]");
    }
    if (version == changes_.size()) return Snapshot{version, final_};
    std::size_t base = version / interval_;
    Text text = checkpoints_[base];
    for (std::size_t k = base * interval_; k < version; ++k) apply_change_in_place(text, changes_[k]);
    return Snapshot{version, std::move(text)};
}

}  // namespace textcast
