#pragma once

#include <stdexcept>
#include <string>

namespace cartanlab {

enum class ErrorKind {
  DimensionMismatch,
  UnsupportedDegree,
  NotRealSplit,
  NotCommuting,
  Tolerance,
  Domain,
  ZeroFunctional,
  NoSeparator,
  Obstruction,
  Unsupported,
  Overflow,
  Singular,
  Dependent,
  Schema,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it to an exit code and a JSON error entry.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cartanlab
