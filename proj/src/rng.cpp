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

#include "rng.hpp"

#include <algorithm>
#include <cstring>
#include <random>

#include "hashing.hpp"

namespace sbl {

uint64_t Rng::NextU64() {
  uint8_t buf[8];
  Fill(buf, sizeof(buf));
  uint64_t v = 0;
  for (uint8_t b : buf) v = (v << 8) | b;
  return v;
}

uint64_t Rng::UniformU64(uint64_t bound) {
  // Rejection sampling over the largest multiple of bound below 2^64.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = NextU64();
    if (v < limit) return v % bound;
  }
}

bool Rng::Chance(double probability) {
  if (probability <= 0.0) return false;
  if (probability >= 1.0) return true;
  constexpr uint64_t kScale = uint64_t{1} << 53;
  return UniformU64(kScale) < static_cast<uint64_t>(probability * static_cast<double>(kScale));
}

DeterministicRng::DeterministicRng(Bytes seed) : seed_(std::move(seed)) {}

DeterministicRng DeterministicRng::FromSeed(uint64_t seed) {
  Bytes bytes(8);
  for (int i = 7; i >= 0; --i) {
    bytes[static_cast<size_t>(i)] = static_cast<uint8_t>(seed & 0xff);
    seed >>= 8;
  }
  return DeterministicRng(bytes);
}

DeterministicRng DeterministicRng::Child(std::string_view label) const {
  Bytes material = seed_;
  material.push_back(0x01);
  material.insert(material.end(), label.begin(), label.end());
  auto digest = Sha256(material);
  return DeterministicRng(Bytes(digest.begin(), digest.end()));
}

void DeterministicRng::Fill(uint8_t* out, size_t n) {
  while (n > 0) {
    if (pos_ == block_.size()) {
      Bytes material = seed_;
      uint64_t c = counter_++;
      for (int i = 7; i >= 0; --i) material.push_back(static_cast<uint8_t>(c >> (8 * i)));
      auto digest = Sha256(material);
      block_.assign(digest.begin(), digest.end());
      pos_ = 0;
    }
    size_t take = std::min(n, block_.size() - pos_);
    std::memcpy(out, block_.data() + pos_, take);
    pos_ += take;
    out += take;
    n -= take;
  }
}

void SystemRng::Fill(uint8_t* out, size_t n) {
  static thread_local std::mt19937_64 gen = [] {
    std::random_device rd;
    std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
    return std::mt19937_64(seq);
  }();
  while (n >= 8) {
    uint64_t v = gen();
    std::memcpy(out, &v, 8);
    out += 8;
    n -= 8;
  }
  if (n > 0) {
    uint64_t v = gen();
    std::memcpy(out, &v, n);
  }
}

}  // namespace sbl
