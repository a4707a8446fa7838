// Copyright 2026 The irisnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `irisnet` command line: synth, pairs, align, encode, match, eval,
// train and kernels. Exposed as a function so tests can drive it in-process.

#ifndef IRISNET_CLI_HPP_
#define IRISNET_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace irisnet::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataFailure = 2, kNumericFailure = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Where `encode` stores, and `match` looks up, the code of a manifest image.
std::filesystem::path code_path(const std::filesystem::path& codes_dir, const std::string& image);

/// Output location of a manifest path below dir: absolute paths lose their
/// root and `..` components become `_up_`, so nothing escapes dir.
std::filesystem::path contained_path(const std::filesystem::path& dir, const std::string& path);

}  // namespace irisnet::cli

#endif  // IRISNET_CLI_HPP_
