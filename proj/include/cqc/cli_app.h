// Copyright 2026 The cqc Authors
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


// Command-line front end. Each command validates its parameters, calls the library,
// and writes a CSV or JSON report that embeds the effective configuration.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitComputation = 3;
inline constexpr int kExitResource = 4;

inline constexpr int kReportSchemaVersion = 1;

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// `args` excludes the program name. Reports go to `out` (or to --out files),
// progress and error JSON to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqc::cli
