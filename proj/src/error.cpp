#include "textcast/error.hpp"

namespace textcast {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::OffsetOutOfBounds: return "OffsetOutOfBounds";
    case ErrorCode::DeletedTextMismatch: return "DeletedTextMismatch";
    case ErrorCode::NoOpChange: return "NoOpChange";
    case ErrorCode::TimestampOrder: return "TimestampOrder";
    case ErrorCode::VersionOutOfRange: return "VersionOutOfRange";
    case ErrorCode::CorruptHistory: return "CorruptHistory";
    case ErrorCode::InteriorIntersection: return "InteriorIntersection";
    case ErrorCode::UnmappablePosition: return "UnmappablePosition";
    case ErrorCode::MappingShapeMismatch: return "MappingShapeMismatch";
    case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::AmbiguousRange: return "AmbiguousRange";
    case ErrorCode::ReplacementEscapesRegion: return "ReplacementEscapesRegion";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::SpanOutOfBounds: return "SpanOutOfBounds";
    case ErrorCode::InvalidUtf8: return "InvalidUtf8";
    case ErrorCode::NotTextcast: return "NotTextcast";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::MalformedEvent: return "MalformedEvent";
    case ErrorCode::ReplayInvalid: return "ReplayInvalid";
    }
    return "Unknown";
}

}  // namespace textcast
