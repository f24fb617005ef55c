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

#ifndef SBL_HASHING_HPP_
#define SBL_HASHING_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sbl {

using Bytes = std::vector<uint8_t>;
using Digest = std::array<uint8_t, 32>;

Digest Sha256(const uint8_t* data, size_t n);
Digest Sha256(const Bytes& data);

void AppendU32(Bytes& out, uint32_t v);
void AppendU64(Bytes& out, uint64_t v);

// Injective encoding of an ordered list of byte strings:
//   tag || be32(count) || for each item: be32(len) || item
Bytes EncodeByteList(std::string_view tag, const std::vector<Bytes>& items);

// Digest of the list encoding above.
Digest HashByteList(std::string_view tag, const std::vector<Bytes>& items);

std::string HexEncode(const uint8_t* data, size_t n);
std::string HexEncode(const Bytes& data);

// Strict decode: even length, lowercase or uppercase digits only.
bool HexDecode(std::string_view hex, Bytes* out);

}  // namespace sbl

#endif  // SBL_HASHING_HPP_
