// Copyright 2026 The organdet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ORGANDET_TOOLS_ORGANDET_CLI_H_
#define ORGANDET_TOOLS_ORGANDET_CLI_H_

#include <iosfwd>

namespace organdet::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the organdet command line. Data goes to `out`, diagnostics to
// `err`.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace organdet::cli

#endif  // ORGANDET_TOOLS_ORGANDET_CLI_H_
