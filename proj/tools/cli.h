// Copyright 2026 The rhpcfg Authors.
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

#ifndef RHPCFG_TOOLS_CLI_H_
#define RHPCFG_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace rhpcfg::cli {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kPropertyViolation = 3,
};

// Runs one command line (args excludes the program name). Results go to out
// as JSON lines; diagnostics and the resolved configuration go to err.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace rhpcfg::cli

#endif  // RHPCFG_TOOLS_CLI_H_
