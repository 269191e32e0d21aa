// Copyright 2026 The massrank Authors.
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

#ifndef MASSRANK_TESTS_CLI_UTIL_H_
#define MASSRANK_TESTS_CLI_UTIL_H_

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "massrank/io.h"

namespace massrank::testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `<cli> <args>` through the shell in `cwd`; `env` is prepended as
// shell assignments (e.g. "MASSRANK_JOBS=4").
inline CliResult RunCli(const std::string& cli, const std::string& args,
                        const std::filesystem::path& cwd, const std::string& env = "") {
  const auto out = cwd / ".cli_stdout";
  const auto err = cwd / ".cli_stderr";
  const std::string cmd = "cd '" + cwd.string() + "' && " + env + (env.empty() ? "" : " ") +
                          "'" + cli + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(out.string());
  r.err = ReadFile(err.string());
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

}  // namespace massrank::testing

#endif  // MASSRANK_TESTS_CLI_UTIL_H_
