// tools/cli.h

// Copyright 2026  The mvsv Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MVSV_TOOLS_CLI_H_
#define MVSV_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace mvsv {

/// Runs the `mvsv` command line.  Reports go to `out`; on failure a single
/// line "error: kind=<Kind> message=\"...\"" goes to `err`.  Returns the
/// process exit code.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Convenience overload: args excludes the program name.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace mvsv

#endif  // MVSV_TOOLS_CLI_H_
