#pragma once

#include <stdexcept>
#include <string>

namespace bess {

// Error categories surfaced through the C API as status codes.
enum class ErrorCode {
  InvalidArgument,
  Schema,
  Alignment,
  InsufficientData,
  Lattice,
  Divergence,
  InsufficientHistory,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(ErrorCode::Schema, what) {}
};

struct AlignmentError : Error {
  explicit AlignmentError(const std::string& what) : Error(ErrorCode::Alignment, what) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& what) : Error(ErrorCode::InsufficientData, what) {}
};

struct LatticeError : Error {
  explicit LatticeError(const std::string& what) : Error(ErrorCode::Lattice, what) {}
};

struct DivergenceError : Error {
  explicit DivergenceError(const std::string& what) : Error(ErrorCode::Divergence, what) {}
};

struct InsufficientHistoryError : Error {
  explicit InsufficientHistoryError(const std::string& what) : Error(ErrorCode::InsufficientHistory, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace bess
