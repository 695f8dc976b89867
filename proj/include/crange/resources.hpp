// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>

namespace crange {

enum class Backend { vm, container };

std::string_view to_string(Backend b) noexcept;
Backend backend_from_string(std::string_view s);  // throws SchemaError

// Resource caps applied to one instance. All fields positive, cpu_pct <= 100.
struct ResourceCaps {
  long memory_mb = 0;
  long storage_mb = 0;
  int cpu_pct = 0;

  friend bool operator==(const ResourceCaps&, const ResourceCaps&) = default;
};

// Throws SchemaError naming the offending field.
void check(const ResourceCaps& caps);

// One usage observation. For a single instance instance_count is 1; samples
// aggregated over an environment carry the number of contributing instances.
struct ResourceSample {
  double timestamp = 0.0;  // seconds
  std::size_t instance_count = 0;
  double memory_mb = 0.0;
  double storage_mb = 0.0;
  double cpu_pct = 0.0;

  friend bool operator==(const ResourceSample&, const ResourceSample&) = default;
};

}  // namespace crange
