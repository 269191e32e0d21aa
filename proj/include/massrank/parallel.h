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

#ifndef MASSRANK_PARALLEL_H_
#define MASSRANK_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace massrank {

// Runs fn(0) .. fn(n-1) on up to `jobs` threads (jobs <= 1 runs inline).
// Work items must write only to their own output slots. If any item throws,
// the exception of the lowest failing index is rethrown after all threads
// join, so error reporting does not depend on scheduling.
void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)>& fn);

}  // namespace massrank

#endif  // MASSRANK_PARALLEL_H_
