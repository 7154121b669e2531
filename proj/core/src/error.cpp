#include "cropyield/error.hpp"

#include <utility>

namespace cropyield {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::NumericParseError: return "NumericParseError";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::UnknownFeature: return "UnknownFeature";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::SingleClass: return "SingleClass";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::MissingLabels: return "MissingLabels";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::IoError: return "IoError";
    case Errc::ModelFormat: return "ModelFormat";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

ParseError::ParseError(Errc code, const std::string& message, std::size_t row,
                       std::string column, std::string token)
    : Error(code, message), row_(row), column_(std::move(column)), token_(std::move(token)) {}

}  // namespace cropyield
