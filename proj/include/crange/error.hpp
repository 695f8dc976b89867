// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace crange {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input text is not well-formed (YAML, XML, JSON, CSV or a line grammar).
// Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
  ParseError(std::string message, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// Input is well-formed but violates the document schema or a type invariant.
class SchemaError : public Error {
public:
  SchemaError(std::string field, std::string reason);

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  std::string field_;
  std::string reason_;
};

// An operation was called outside its contract (unknown id, wrong backend,
// identical environment tags, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

// Raised by drivers when a backend operation fails.
class DriverError : public Error {
public:
  using Error::Error;
};

// A plan directive failed and every instance created so far was rolled back.
// The directive index is 1-based.
class ProvisionError : public Error {
public:
  ProvisionError(std::size_t directive_index, const std::string& cause);

  std::size_t directive_index() const noexcept { return directive_index_; }

private:
  std::size_t directive_index_;
};

// A directive failed and the rollback that followed also failed. The
// environment may still hold live resources, listed in failures().
class RollbackError : public Error {
public:
  RollbackError(std::size_t directive_index, const std::string& cause,
                std::vector<std::string> failures);

  std::size_t directive_index() const noexcept { return directive_index_; }
  const std::vector<std::string>& failures() const noexcept { return failures_; }

private:
  std::size_t directive_index_;
  std::vector<std::string> failures_;
};

}  // namespace crange
