// Copyright 2026 The DCSH Authors.
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
#ifndef DCSH_CLI_H_
#define DCSH_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dcsh {

inline constexpr char kToolVersion[] = "0.1.0";

// Exit statuses of the command-line tool.
enum ExitStatus {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

// Runs one subcommand. `args` excludes the program name, e.g.
// {"train", "--bits", "32", "--out", "run"}. A `--config FILE` argument is
// expanded into flags from its key=value lines; explicit flags win.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dcsh

#endif  // DCSH_CLI_H_
