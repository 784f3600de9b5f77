// Copyright 2026 The SRAIS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SRAIS_CLI_HPP
#define SRAIS_CLI_HPP

#include <iosfwd>

namespace srais {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the srais command-line tool.
/**
 * Subcommands: run, verify-emd, property-suite, presets. Returns 0 on
 * success, 1 on a usage or validation error, 2 on a runtime failure.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srais

#endif  // SRAIS_CLI_HPP
