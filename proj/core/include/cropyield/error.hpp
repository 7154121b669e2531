#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cropyield {

enum class Errc {
  MissingColumn,
  NumericParseError,
  EmptyFile,
  EmptyDataset,
  EmptyInput,
  TooFewSamples,
  EmptyClass,
  UnknownFeature,
  DimensionMismatch,
  KTooLarge,
  SingleClass,
  LengthMismatch,
  LabelOutOfRange,
  EmptyMatrix,
  EmptyTable,
  MissingLabels,
  InvalidSpec,
  InvalidConfig,
  ValidationFailed,
  IoError,
  ModelFormat,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

/// A CSV cell that could not be read. `row` is 1-based over data rows
/// (the header is row 0).
class ParseError : public Error {
 public:
  ParseError(Errc code, const std::string& message, std::size_t row,
             std::string column, std::string token);

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t row_;
  std::string column_;
  std::string token_;
};

}  // namespace cropyield
