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

#include "group.hpp"

#include <cstring>
#include <unordered_map>

#include "hashing.hpp"

namespace sbl {

namespace {

// Miller-Rabin rounds for parameter validation and generation.
constexpr int kPrimalityReps = 64;

// 2048-bit MODP safe prime (group 14), p = 2^2048 - 2^1984 - 1 + 2^64 * (floor(2^1918 pi) + 124476).
constexpr const char* kModp2048Hex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1"
    "29024E088A67CC74020BBEA63B139B22514A08798E3404DD"
    "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245"
    "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3D"
    "C2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F"
    "83655D23DCA3AD961C62F356208552BB9ED529077096966D"
    "670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9"
    "DE2BCBF6955817183995497CEA956AE515D2261898FA0510"
    "15728E5A8AACAA68FFFFFFFFFFFFFFFF";

bool IsProbablePrime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) != 0;
}

// Constant-time modexp needs an odd modulus and a positive exponent; both
// hold for every call site (p is an odd prime, scalars live in [1, q-1]).
mpz_class PowmSec(const mpz_class& base, const mpz_class& e, const mpz_class& mod) {
  mpz_class r;
  mpz_powm_sec(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return r;
}

mpz_class PowmVar(const mpz_class& base, const mpz_class& e, const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return r;
}

}  // namespace

std::string_view SecurityLabelName(SecurityLabel label) {
  return label == SecurityLabel::kProduction ? "production" : "test";
}

mpz_class MpzFromBytes(const Bytes& bytes) {
  mpz_class v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

Bytes MpzToFixedBytes(const mpz_class& v, size_t width) {
  Bytes out(width, 0);
  size_t needed = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v == 0) return out;
  if (needed > width) throw Error("value does not fit fixed width");
  size_t count = 0;
  mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0, v.get_mpz_t());
  return out;
}

Group::Group(GroupParams params) : params_(std::move(params)) {
  generator_ = GroupElement{params_.g};
  element_bytes_ = (mpz_sizeinbase(params_.p.get_mpz_t(), 2) + 7) / 8;
  scalar_bytes_ = (mpz_sizeinbase(params_.q.get_mpz_t(), 2) + 7) / 8;
  q_bits_ = static_cast<unsigned>(mpz_sizeinbase(params_.q.get_mpz_t(), 2));
  capacity_bits_ = q_bits_;
  // The toy group gets a wider advertised budget than bits(q); see header.
  if (params_.p == 23 && params_.q == 11 && params_.g == 2) capacity_bits_ = 11;
}

Group Group::TestGroup() {
  GroupParams params;
  params.p = 23;
  params.q = 11;
  params.g = 2;
  params.label = SecurityLabel::kTest;
  return Group(std::move(params));
}

Group Group::Production2048() {
  GroupParams params;
  params.p = mpz_class(kModp2048Hex, 16);
  params.q = (params.p - 1) / 2;
  params.g = 2;
  params.label = SecurityLabel::kProduction;
  return Group(std::move(params));
}

Group Group::Generate(unsigned bits, const std::optional<Bytes>& seed,
                      std::optional<SecurityLabel> label_opt) {
  SecurityLabel label = label_opt.value_or(bits >= 2048 ? SecurityLabel::kProduction
                                                        : SecurityLabel::kTest);
  if (bits < 16) throw ConfigError("group size below 16 bits");
  if (label == SecurityLabel::kProduction && bits < 2048) {
    throw ConfigError("production groups require at least 2048 bits");
  }
  if (bits == 2048 && !seed.has_value()) return Production2048();

  DeterministicRng det = seed.has_value() ? DeterministicRng(*seed)
                                          : DeterministicRng(SystemRng().Take(32));
  const size_t q_bytes = (bits - 1 + 7) / 8;
  const unsigned top_bit = (bits - 2) % 8;
  for (;;) {
    Bytes buf = det.Take(q_bytes);
    buf[0] &= static_cast<uint8_t>((1u << (top_bit + 1)) - 1);
    buf[0] |= static_cast<uint8_t>(1u << top_bit);
    buf[q_bytes - 1] |= 0x01;
    mpz_class q = MpzFromBytes(buf);
    mpz_class p = 2 * q + 1;
    // Cheap sieve first; the full test is expensive at production sizes.
    if (mpz_gcd_ui(nullptr, q.get_mpz_t(), 223092870u) != 1) continue;
    if (mpz_gcd_ui(nullptr, p.get_mpz_t(), 223092870u) != 1) continue;
    if (!IsProbablePrime(q) || !IsProbablePrime(p)) continue;
    GroupParams params;
    params.p = p;
    params.q = q;
    // Smallest square that generates the order-q subgroup.
    for (unsigned h = 2;; ++h) {
      mpz_class g = (mpz_class(h) * h) % p;
      if (g != 1) {
        params.g = g;
        break;
      }
    }
    params.label = label;
    return Group(std::move(params));
  }
}

std::optional<Group> Group::FromParams(const GroupParams& params, std::string* error) {
  Group group(params);
  std::string local;
  if (!group.Validate(&local)) {
    if (error != nullptr) *error = local;
    return std::nullopt;
  }
  return group;
}

bool Group::Validate(std::string* error) const {
  auto fail = [&](const char* msg) {
    if (error != nullptr) *error = msg;
    return false;
  };
  if (params_.p < 5 || params_.q < 2) return fail("parameters too small");
  if (params_.p != 2 * params_.q + 1) return fail("p is not 2q + 1");
  if (!IsProbablePrime(params_.p)) return fail("p is not prime");
  if (!IsProbablePrime(params_.q)) return fail("q is not prime");
  if (params_.g <= 1 || params_.g >= params_.p) return fail("generator out of range");
  if (PowmVar(params_.g, params_.q, params_.p) != 1) return fail("generator order is not q");
  return true;
}

GroupElement Group::Mul(const GroupElement& a, const GroupElement& b) const {
  return GroupElement{(a.value * b.value) % params_.p};
}

GroupElement Group::Inverse(const GroupElement& a) const {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), params_.p.get_mpz_t()) == 0) {
    throw Error("element has no inverse");
  }
  return GroupElement{r};
}

GroupElement Group::Exp(const GroupElement& base, const Scalar& e) const {
  if (e.value == 0) return identity();
  return GroupElement{PowmSec(base.value, e.value, params_.p)};
}

GroupElement Group::ExpPublic(const GroupElement& base, const Scalar& e) const {
  return GroupElement{PowmVar(base.value, e.value, params_.p)};
}

GroupElement Group::ExpPublic(const GroupElement& base, const mpz_class& e) const {
  if (e < 0) {
    mpz_class reduced = e % params_.q;
    if (reduced < 0) reduced += params_.q;
    return GroupElement{PowmVar(base.value, reduced, params_.p)};
  }
  return GroupElement{PowmVar(base.value, e, params_.p)};
}

bool Group::IsMember(const mpz_class& candidate) const {
  if (candidate <= 0 || candidate >= params_.p) return false;
  // Quadratic residues mod a safe prime are exactly the order-q subgroup
  // together with the identity.
  return mpz_jacobi(candidate.get_mpz_t(), params_.p.get_mpz_t()) == 1;
}

Scalar Group::ScalarFromUint(uint64_t v) const {
  mpz_class m = static_cast<unsigned long>(v >> 32);
  m <<= 32;
  m += static_cast<unsigned long>(v & 0xffffffffu);
  return Scalar{m % params_.q};
}

Scalar Group::ScalarFromMpz(const mpz_class& v) const {
  mpz_class r = v % params_.q;
  if (r < 0) r += params_.q;
  return Scalar{r};
}

Scalar Group::ScalarAdd(const Scalar& a, const Scalar& b) const {
  mpz_class r = a.value + b.value;
  if (r >= params_.q) r -= params_.q;
  return Scalar{r};
}

Scalar Group::ScalarSub(const Scalar& a, const Scalar& b) const {
  mpz_class r = a.value - b.value;
  if (r < 0) r += params_.q;
  return Scalar{r};
}

Scalar Group::ScalarMul(const Scalar& a, const Scalar& b) const {
  return Scalar{(a.value * b.value) % params_.q};
}

Scalar Group::ScalarNeg(const Scalar& a) const {
  if (a.value == 0) return a;
  return Scalar{params_.q - a.value};
}

std::optional<Scalar> Group::ScalarInverse(const Scalar& a) const {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), params_.q.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  return Scalar{r};
}

Scalar Group::RandomScalar(Rng& rng) const {
  const unsigned bits = q_bits_;
  const size_t nbytes = (bits + 7) / 8;
  const unsigned spare = nbytes * 8 - bits;
  const uint8_t mask = static_cast<uint8_t>(0xffu >> spare);
  for (;;) {
    Bytes buf = rng.Take(nbytes);
    buf[0] &= mask;
    mpz_class v = MpzFromBytes(buf);
    if (v == 0 || v >= params_.q) continue;
    return Scalar{v};
  }
}

Bytes Group::EncodeElement(const GroupElement& a) const {
  return MpzToFixedBytes(a.value, element_bytes_);
}

Bytes Group::EncodeScalar(const Scalar& s) const {
  return MpzToFixedBytes(s.value, scalar_bytes_);
}

std::optional<GroupElement> Group::DecodeElement(const Bytes& bytes) const {
  if (bytes.size() != element_bytes_) return std::nullopt;
  mpz_class v = MpzFromBytes(bytes);
  if (!IsMember(v)) return std::nullopt;
  return GroupElement{v};
}

std::optional<Scalar> Group::DecodeScalar(const Bytes& bytes) const {
  if (bytes.size() != scalar_bytes_) return std::nullopt;
  mpz_class v = MpzFromBytes(bytes);
  if (v >= params_.q) return std::nullopt;
  return Scalar{v};
}

std::string Group::ElementHex(const GroupElement& a) const { return HexEncode(EncodeElement(a)); }

std::string Group::ScalarHex(const Scalar& s) const { return HexEncode(EncodeScalar(s)); }

Scalar Group::HashToScalar(std::string_view domain_tag, const std::vector<Bytes>& items) const {
  Digest digest = HashByteList(domain_tag, items);
  mpz_class v;
  mpz_import(v.get_mpz_t(), digest.size(), 1, 1, 1, 0, digest.data());
  return Scalar{v % params_.q};
}

std::optional<uint64_t> Group::DlogBounded(const GroupElement& base, const GroupElement& target,
                                           uint64_t bound) const {
  if (bound == 0) return std::nullopt;
  if (target.value == 1) return 0;
  uint64_t baby = 1;
  while (baby * baby < bound) ++baby;

  std::unordered_map<std::string, uint64_t> table;
  table.reserve(static_cast<size_t>(baby));
  // Baby steps: target * base^-j for j in [0, baby).
  GroupElement cur = target;
  GroupElement base_inv = Inverse(base);
  for (uint64_t j = 0; j < baby; ++j) {
    table.emplace(HexEncode(EncodeElement(cur)), j);
    cur = Mul(cur, base_inv);
  }
  // Giant steps: base^(i * baby) for i * baby < bound.
  GroupElement stride = ExpPublic(base, mpz_class(static_cast<unsigned long>(baby)));
  GroupElement giant = identity();
  for (uint64_t i = 0; i * baby < bound; ++i) {
    auto it = table.find(HexEncode(EncodeElement(giant)));
    if (it != table.end()) {
      uint64_t exponent = i * baby + it->second;
      if (exponent < bound) return exponent;
    }
    giant = Mul(giant, stride);
  }
  return std::nullopt;
}

}  // namespace sbl
