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

#include "massrank/rng.h"

namespace massrank {

uint64_t CounterRng::Mix(uint64_t z) {
  // splitmix64 finalizer.
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng CounterRng::Split(uint64_t stream) const {
  CounterRng child(0);
  child.key_ = Mix(key_ ^ Mix(stream + kGamma));
  return child;
}

CounterRng CounterRng::Split(std::string_view label) const {
  return Split(HashLabel(label));
}

uint64_t CounterRng::Below(uint64_t n) {
  // Rejection sampling on the top of the range to avoid modulo bias.
  const uint64_t limit = max() - max() % n;
  uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % n;
}

double CounterRng::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

uint64_t HashLabel(std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace massrank
