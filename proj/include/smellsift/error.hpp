#pragma once

#include <stdexcept>
#include <string>

namespace smellsift {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Source file could not be turned into a unit (no top-level type found).
class ParseError : public Error {
public:
  using Error::Error;
};

/// Feature vector or report does not match the expected schema.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Malformed input row or document. Carries the 1-based row when known.
class FormatError : public Error {
public:
  explicit FormatError(const std::string& what, std::size_t row = 0)
      : Error(row == 0 ? what : what + " (row " + std::to_string(row) + ")"), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// A class is empty or too small for the requested operation.
class DegenerateDataset : public Error {
public:
  using Error::Error;
};

class VersionError : public Error {
public:
  using Error::Error;
};

} // namespace smellsift
