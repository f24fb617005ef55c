// Copyright 2026 The sblvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SBL_RNG_HPP_
#define SBL_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace sbl {

using Bytes = std::vector<uint8_t>;

class Rng {
 public:
  virtual ~Rng() = default;
  virtual void Fill(uint8_t* out, size_t n) = 0;

  Bytes Take(size_t n) {
    Bytes out(n);
    if (n != 0) Fill(out.data(), n);
    return out;
  }

  uint64_t NextU64();

  // Uniform value in [0, bound); bound must be nonzero.
  uint64_t UniformU64(uint64_t bound);

  // Bernoulli draw; probability is clamped to [0, 1].
  bool Chance(double probability);
};

// SHA-256 in counter mode: block i is SHA256(seed || be64(i)).
// Every stream derived from the same seed and label sequence is
// reproducible across platforms.
class DeterministicRng final : public Rng {
 public:
  explicit DeterministicRng(Bytes seed);
  static DeterministicRng FromSeed(uint64_t seed);

  // Independent child stream; children with distinct labels never
  // overlap the parent or each other.
  DeterministicRng Child(std::string_view label) const;

  void Fill(uint8_t* out, size_t n) override;

 private:
  Bytes seed_;
  uint64_t counter_ = 0;
  Bytes block_;
  size_t pos_ = 0;
};

class SystemRng final : public Rng {
 public:
  void Fill(uint8_t* out, size_t n) override;
};

}  // namespace sbl

#endif  // SBL_RNG_HPP_
