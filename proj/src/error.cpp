// SPDX-License-Identifier: Apache-2.0
#include "crange/error.hpp"

#include <utility>

namespace crange {

namespace {

std::string with_position(const std::string& message, std::size_t line, std::size_t column) {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error(with_position(message, line, column)), line_(line), column_(column) {}

SchemaError::SchemaError(std::string field, std::string reason)
    : Error(field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}

ProvisionError::ProvisionError(std::size_t directive_index, const std::string& cause)
    : Error("directive " + std::to_string(directive_index) + ": " + cause),
      directive_index_(directive_index) {}

RollbackError::RollbackError(std::size_t directive_index, const std::string& cause,
                             std::vector<std::string> failures)
    : Error("directive " + std::to_string(directive_index) + ": " + cause + "; rollback failed for " +
            std::to_string(failures.size()) + " resource(s)"),
      directive_index_(directive_index),
      failures_(std::move(failures)) {}

}  // namespace crange
