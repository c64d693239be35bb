#pragma once

#include <stdexcept>
#include <string>

namespace pathoscope {

// Process exit codes. Every error class below maps onto exactly one of these.
enum class ExitCode : int {
  kOk = 0,
  kInput = 2,
  kJoin = 3,
  kTransport = 4,
  kDegenerate = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kInput; }
};

// Bad arguments or unreadable input files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A document parsed but violates its schema (missing class, out-of-range value, ...).
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

// A bundled dataset fails one of its invariants. The message names the invariant.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& invariant, const std::string& detail)
      : Error("integrity check '" + invariant + "' failed: " + detail), invariant_(invariant) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

// Filename could not be decoded under a naming convention. `field` names the offending part.
class ParseError : public InputError {
 public:
  ParseError(const std::string& field, const std::string& detail)
      : InputError("cannot parse " + field + ": " + detail), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Annotation payload is unusable as a whole (not JSON, wrong shape, unknown segment id).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class JoinError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kJoin; }
};

class TransportError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kTransport; }
};

// Statistic undefined for the given input (constant series, too few observations).
class DegenerateStatisticsError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kDegenerate; }
};

}  // namespace pathoscope
