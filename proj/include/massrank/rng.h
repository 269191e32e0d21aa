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

#ifndef MASSRANK_RNG_H_
#define MASSRANK_RNG_H_

#include <cstdint>
#include <limits>
#include <string_view>

namespace massrank {

// Counter-based generator: output i is a bijective mix of (key, i), so a
// stream can be split into independent children by hashing a label into the
// key. Results never depend on scheduling or on how many draws a sibling
// stream made.
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t key) : key_(Mix(key)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return Mix(key_ + (++counter_) * kGamma); }

  CounterRng Split(uint64_t stream) const;
  CounterRng Split(std::string_view label) const;

  // Uniform integer in [0, n); n > 0.
  uint64_t Below(uint64_t n);
  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static uint64_t Mix(uint64_t z);

  uint64_t key_;
  uint64_t counter_ = 0;
};

// 64-bit FNV-1a; stable label hashing for stream splits.
uint64_t HashLabel(std::string_view label);

}  // namespace massrank

#endif  // MASSRANK_RNG_H_
