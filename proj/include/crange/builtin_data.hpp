// SPDX-License-Identifier: Apache-2.0
//
// Copies of the files under data/, compiled into the library so the tools
// work without a data directory on disk.
#pragma once

#include <string_view>

namespace crange::builtin {

std::string_view cwe_map_json() noexcept;
std::string_view suitability_rules_yaml() noexcept;
std::string_view profiles_yaml() noexcept;

}  // namespace crange::builtin
