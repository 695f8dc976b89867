// SPDX-License-Identifier: Apache-2.0
#include "crange/resources.hpp"

#include <string>

#include "crange/error.hpp"

namespace crange {

std::string_view to_string(Backend b) noexcept {
  return b == Backend::vm ? "vm" : "container";
}

Backend backend_from_string(std::string_view s) {
  if (s == "vm") return Backend::vm;
  if (s == "container") return Backend::container;
  throw SchemaError("backend", "unknown backend '" + std::string(s) + "'");
}

void check(const ResourceCaps& caps) {
  if (caps.memory_mb <= 0) throw SchemaError("limits.memory_mb", "must be positive");
  if (caps.storage_mb <= 0) throw SchemaError("limits.storage_mb", "must be positive");
  if (caps.cpu_pct < 1 || caps.cpu_pct > 100)
    throw SchemaError("limits.cpu_pct", "must be within 1..100");
}

}  // namespace crange
