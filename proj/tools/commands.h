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

#ifndef MASSRANK_TOOLS_COMMANDS_H_
#define MASSRANK_TOOLS_COMMANDS_H_

namespace massrank {

// Entry point of the `massrank` command-line tool. Exit codes: 0 ok,
// 1 usage, 2 validation, 3 adapter failure.
int RunMassrank(int argc, char** argv);

}  // namespace massrank

#endif  // MASSRANK_TOOLS_COMMANDS_H_
