#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace textcast {

enum class ErrorCode {
    OffsetOutOfBounds,
    DeletedTextMismatch,
    NoOpChange,
    TimestampOrder,
    VersionOutOfRange,
    CorruptHistory,
    InteriorIntersection,
    UnmappablePosition,
    MappingShapeMismatch,
    RangeOutOfBounds,
    EmptyRange,
    AmbiguousRange,
    ReplacementEscapesRegion,
    EmptySelection,
    SpanOutOfBounds,
    InvalidUtf8,
    NotTextcast,
    UnsupportedVersion,
    MalformedEvent,
    ReplayInvalid,
};

/// Stable identifier used in CLI output and service error bodies.
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `seq` names the offending change when
/// one exists; `line`/`column` are 1-based positions for cast-file errors.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> seq = std::nullopt)
        : std::runtime_error(message), code_(code), seq_(seq) {}

    Error& at(std::size_t line, std::size_t column) {
        line_ = line;
        column_ = column;
        return *this;
    }

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> seq() const noexcept { return seq_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    std::optional<std::size_t> column() const noexcept { return column_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> seq_;
    std::optional<std::size_t> line_;
    std::optional<std::size_t> column_;
};

}  // namespace textcast
