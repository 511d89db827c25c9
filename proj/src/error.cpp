#include "carve/error.hpp"

namespace carve {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValueError: return "ValueError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::NothingToRemove: return "NothingToRemove";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::ItemNeverRanked: return "ItemNeverRanked";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace carve
