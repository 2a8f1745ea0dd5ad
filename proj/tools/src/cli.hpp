// Copyright 2026 The mgtloc Authors.
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

#ifndef MGTLOC_TOOLS_CLI_HPP_
#define MGTLOC_TOOLS_CLI_HPP_

#include <string>
#include <vector>

namespace mgtloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitScorer = 3;

// Parses argv (argv[0] is the program name), runs one subcommand and maps
// errors to exit codes: 1 usage, 2 data, 3 scorer transport/protocol.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace mgtloc::cli

#endif  // MGTLOC_TOOLS_CLI_HPP_
