// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crange::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;      // validation or schema errors in the input
inline constexpr int kOperational = 2;  // unreadable/unwritable files, failed runs, bad usage

// args excludes the program name. Normal output goes to `out`; every failure
// writes exactly one JSON object line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crange::cli
