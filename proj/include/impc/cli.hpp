// Copyright 2026 The impc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace impc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Values read from a key=value config file; every key is optional.
struct RunConfig {
    std::optional<double> period;
    std::optional<double> width;
    std::optional<int> truncation;
    std::optional<double> epsilon;
    std::optional<double> tol;
    std::optional<int> particles;
    std::optional<double> shift;
};

/// Parses `key = value` lines (keys P, c, M, epsilon, tol, particles,
/// a_override). Blank lines and `#` comments are ignored. Throws
/// std::invalid_argument on unknown or repeated keys and malformed values.
RunConfig parse_config(std::string_view text);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Entry point behind the `impc` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace impc
