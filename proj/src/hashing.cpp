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

#include "hashing.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace sbl {

Digest Sha256(const uint8_t* data, size_t n) {
  Digest out{};
  unsigned int out_len = 0;
  if (EVP_Digest(data, n, out.data(), &out_len, EVP_sha256(), nullptr) != 1 || out_len != out.size()) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

Digest Sha256(const Bytes& data) { return Sha256(data.data(), data.size()); }

void AppendU32(Bytes& out, uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void AppendU64(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

Bytes EncodeByteList(std::string_view tag, const std::vector<Bytes>& items) {
  Bytes out(tag.begin(), tag.end());
  AppendU32(out, static_cast<uint32_t>(items.size()));
  for (const Bytes& item : items) {
    AppendU32(out, static_cast<uint32_t>(item.size()));
    out.insert(out.end(), item.begin(), item.end());
  }
  return out;
}

Digest HashByteList(std::string_view tag, const std::vector<Bytes>& items) {
  return Sha256(EncodeByteList(tag, items));
}

std::string HexEncode(const uint8_t* data, size_t n) {
  static const char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (size_t i = 0; i < n; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0x0f]);
  }
  return out;
}

std::string HexEncode(const Bytes& data) { return HexEncode(data.data(), data.size()); }

namespace {
// Lowercase only: every encoder in this library emits lowercase, and strict
// decoding keeps serialized artifacts canonical (one spelling per value).
int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}
}  // namespace

bool HexDecode(std::string_view hex, Bytes* out) {
  if (hex.size() % 2 != 0) return false;
  out->clear();
  out->reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = HexNibble(hex[i]);
    int lo = HexNibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return false;
    out->push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return true;
}

}  // namespace sbl
