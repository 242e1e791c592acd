// Copyright 2026 The QEP Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace qep {

using Rng = std::mt19937_64;

/// Independent generator for one (module, sample, phase, ...) tag tuple,
/// derived deterministically from a master seed.
inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (tags.size() + 1));
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Stream tags; values are part of the replay contract, do not renumber.
namespace stream {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kTestSet = 2;
inline constexpr std::uint64_t kBatch = 3;
inline constexpr std::uint64_t kShots = 4;
inline constexpr std::uint64_t kSingleShot = 5;
inline constexpr std::uint64_t kLanczos = 6;
inline constexpr std::uint64_t kAudit = 7;
inline constexpr std::uint64_t kSweep = 8;
}  // namespace stream

}  // namespace qep
