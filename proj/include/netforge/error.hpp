#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace netforge {

enum class Errc {
  // core
  EmptyName,
  EmptyPorts,
  InvalidNetName,
  ArityMismatch,
  DuplicateModelName,
  DuplicateSubcircuitName,
  DuplicatePins,
  SubcircuitFrozen,
  // params
  SyntaxError,
  UnknownFunction,
  CyclicDependency,
  UnresolvedIdentifier,
  NonNumericReference,
  DivisionByZero,
  NonFiniteResult,
  InvalidSpec,
  UnknownCorner,
  InvalidNumber,
  // manip
  PortOutOfRange,
  SamePort,
  ZeroLength,
  EmptyOutName,
  InvalidShape,
  PortFnArity,
  InvalidProbability,
  // readers
  ParseError,
  SchemaError,
  UnknownDirective,
  NoModule,
  MultipleModules,
  NoPorts,
  // exporters
  LintErrors,
  UnknownDialect,
  DuplicateDialect,
  VersionMismatch,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure raised by the library. `code()` is the
/// stable, machine-checkable part; `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(Errc code, std::size_t offset, const std::string& message)
      : Error(code, message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class CycleError : public Error {
 public:
  explicit CycleError(std::vector<std::string> cycle);

  /// Parameter names along the cycle; the first name is repeated at the end.
  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class UnknownCornerError : public Error {
 public:
  UnknownCornerError(const std::string& requested, std::vector<std::string> available);

  const std::vector<std::string>& available() const noexcept { return available_; }

 private:
  std::vector<std::string> available_;
};

/// Line-addressed failure from one of the text readers.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structural problem in a JSON document; `path` is a JSON-pointer-like
/// location such as `/nmos/TT/vth`.
class SchemaError : public Error {
 public:
  SchemaError(Errc code, std::string path, const std::string& message)
      : Error(code, (path.empty() ? std::string("/") : path) + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace netforge
