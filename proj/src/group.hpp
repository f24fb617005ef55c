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
//
// Schnorr group arithmetic over a safe prime p = 2q + 1.  The working
// subgroup is the order-q group of quadratic residues mod p, so membership
// testing reduces to a Jacobi symbol evaluation.

#ifndef SBL_GROUP_HPP_
#define SBL_GROUP_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace sbl {

enum class SecurityLabel { kTest, kProduction };

std::string_view SecurityLabelName(SecurityLabel label);

// Subgroup element, kept reduced mod p.  Only the owning Group can
// interpret it; mixing elements across groups is a caller bug.
struct GroupElement {
  mpz_class value;

  bool operator==(const GroupElement& other) const { return value == other.value; }
  bool operator!=(const GroupElement& other) const { return value != other.value; }
};

// Exponent, kept reduced mod q.
struct Scalar {
  mpz_class value;

  bool operator==(const Scalar& other) const { return value == other.value; }
  bool operator!=(const Scalar& other) const { return value != other.value; }
};

struct GroupParams {
  mpz_class p;
  mpz_class q;
  mpz_class g;
  SecurityLabel label = SecurityLabel::kTest;
};

class Group {
 public:
  // The tiny fixed group 23 = 2*11 + 1 with generator 2.  Worked examples
  // and unit tests run here; it offers no security whatsoever.
  static Group TestGroup();

  // 2048-bit MODP group (the well-known "group 14" safe prime), g = 2.
  static Group Production2048();

  // Deterministic search when a seed is given, system randomness otherwise.
  // bits is the size of p.  2048-bit requests without a seed return the
  // pinned production group instead of searching.
  static Group Generate(unsigned bits, const std::optional<Bytes>& seed = std::nullopt,
                        std::optional<SecurityLabel> label = std::nullopt);

  static std::optional<Group> FromParams(const GroupParams& params, std::string* error);

  const mpz_class& p() const { return params_.p; }
  const mpz_class& q() const { return params_.q; }
  const GroupElement& generator() const { return generator_; }
  SecurityLabel label() const { return params_.label; }
  const GroupParams& params() const { return params_; }

  size_t element_bytes() const { return element_bytes_; }
  size_t scalar_bytes() const { return scalar_bytes_; }
  unsigned q_bits() const { return q_bits_; }

  // Bit budget available for packed tallies.  Normally the bit length of q;
  // the builtin toy group reports 11 so that small worked configurations
  // are representable there (decoding in the toy group relies on the
  // sum-constrained search paths rather than unique bit fields).
  unsigned tally_capacity_bits() const { return capacity_bits_; }

  GroupElement identity() const { return GroupElement{1}; }
  bool IsIdentity(const GroupElement& a) const { return a.value == 1; }

  GroupElement Mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement Inverse(const GroupElement& a) const;

  // Exponentiation with a secret exponent; constant-time modexp underneath.
  GroupElement Exp(const GroupElement& base, const Scalar& e) const;

  // Variable-time exponentiation for public exponents (verification,
  // simulated proof branches, tally decoding).
  GroupElement ExpPublic(const GroupElement& base, const Scalar& e) const;
  GroupElement ExpPublic(const GroupElement& base, const mpz_class& e) const;

  bool IsMember(const mpz_class& candidate) const;
  bool IsMember(const GroupElement& a) const { return IsMember(a.value); }

  Scalar ScalarFromUint(uint64_t v) const;
  Scalar ScalarFromMpz(const mpz_class& v) const;
  Scalar ScalarAdd(const Scalar& a, const Scalar& b) const;
  Scalar ScalarSub(const Scalar& a, const Scalar& b) const;
  Scalar ScalarMul(const Scalar& a, const Scalar& b) const;
  Scalar ScalarNeg(const Scalar& a) const;
  std::optional<Scalar> ScalarInverse(const Scalar& a) const;

  // Uniform in [1, q-1] by rejection sampling.
  Scalar RandomScalar(Rng& rng) const;

  // Fixed-width big-endian encodings.
  Bytes EncodeElement(const GroupElement& a) const;
  Bytes EncodeScalar(const Scalar& s) const;
  std::optional<GroupElement> DecodeElement(const Bytes& bytes) const;
  std::optional<Scalar> DecodeScalar(const Bytes& bytes) const;

  std::string ElementHex(const GroupElement& a) const;
  std::string ScalarHex(const Scalar& s) const;

  // Fiat-Shamir style map: SHA-256 over the tagged item list, reduced mod q.
  Scalar HashToScalar(std::string_view domain_tag, const std::vector<Bytes>& items) const;

  // Baby-step giant-step discrete log of target to the given base,
  // restricted to exponents in [0, bound).  Space and time O(sqrt(bound)).
  std::optional<uint64_t> DlogBounded(const GroupElement& base, const GroupElement& target,
                                      uint64_t bound) const;

  // Re-checks every structural invariant (primality, safe-prime shape,
  // generator order).  Used on import of untrusted parameters.
  bool Validate(std::string* error) const;

  bool SameParams(const Group& other) const {
    return params_.p == other.params_.p && params_.q == other.params_.q &&
           params_.g == other.params_.g;
  }

 private:
  explicit Group(GroupParams params);

  GroupParams params_;
  GroupElement generator_;
  size_t element_bytes_ = 0;
  size_t scalar_bytes_ = 0;
  unsigned q_bits_ = 0;
  unsigned capacity_bits_ = 0;
};

mpz_class MpzFromBytes(const Bytes& bytes);
Bytes MpzToFixedBytes(const mpz_class& v, size_t width);

}  // namespace sbl

#endif  // SBL_GROUP_HPP_
