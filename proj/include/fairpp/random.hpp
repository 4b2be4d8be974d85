// Copyright 2026 The fairpp Authors
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

// Seeded random streams. Everything here is defined in terms of the raw
// 64-bit output of std::mt19937_64, whose sequence is fixed by the standard,
// so results are reproducible across compilers and platforms. The standard
// distributions (uniform_real_distribution, shuffle, ...) are deliberately
// not used: their algorithms are implementation-defined.

#ifndef FAIRPP_RANDOM_HPP_
#define FAIRPP_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace fairpp {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of sub-stream `index` under `master`, separated by a `domain` tag so
// that e.g. split streams and fit streams never coincide.
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t domain,
                                   std::uint64_t index) {
  return MixBits(MixBits(MixBits(master) ^ domain) + index);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double UniformOpen() {
    return (static_cast<double>(NextBits() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double Uniform() {
    return static_cast<double>(NextBits() >> 11) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n) by rejection; n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = NextBits();
    while (x >= limit) x = NextBits();
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairpp

#endif  // FAIRPP_RANDOM_HPP_
