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
// JSON wire forms for protocol artifacts.  Elements and scalars travel as
// fixed-width lowercase hex of their canonical byte encodings; decoding is
// strict (length, membership, range) so a transcript field cannot smuggle
// an out-of-group value past the replay.

#ifndef SBL_CODEC_HPP_
#define SBL_CODEC_HPP_

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "protocol.hpp"

namespace sbl {

using Json = nlohmann::json;

// Decode failures distinguish structural problems from non-member values;
// importers map them to different error classes.
enum class DecodeFail { kNone, kMalformed, kNonMember };

struct Decoder {
  explicit Decoder(const Group& g) : group(g) {}

  const Group& group;
  DecodeFail fail = DecodeFail::kNone;
  std::string detail;

  bool Failed() const { return fail != DecodeFail::kNone; }
  void Malformed(const std::string& why);
  void NonMember(const std::string& where);

  std::optional<GroupElement> Element(const Json& j, const char* field);
  std::optional<Scalar> ScalarField(const Json& j, const char* field);
  std::optional<Bytes> HexField(const Json& j, const char* field, size_t expect_len);
  std::optional<uint64_t> U64Field(const Json& j, const char* field);
  std::optional<std::string> StringField(const Json& j, const char* field);
};

Json ElementJson(const Group& group, const GroupElement& e);
Json ScalarJson(const Group& group, const Scalar& s);

Json SchnorrProofJson(const Group& group, const SchnorrProof& proof);
std::optional<SchnorrProof> SchnorrProofFromJson(Decoder& dec, const Json& j);

Json DleqProofJson(const Group& group, const DleqProof& proof);
std::optional<DleqProof> DleqProofFromJson(Decoder& dec, const Json& j);

Json VoteProofJson(const Group& group, const VoteProof& proof);
std::optional<VoteProof> VoteProofFromJson(Decoder& dec, const Json& j);

Json BallotJson(const Group& group, const Ballot& ballot);
std::optional<Ballot> BallotFromJson(Decoder& dec, const Json& j);

Json RecoveryShareJson(const Group& group, const RecoveryShare& share);
std::optional<RecoveryShare> RecoveryShareFromJson(Decoder& dec, const Json& j);

Json VoteEncodingJson(const VoteEncoding& encoding);
std::optional<VoteEncoding> VoteEncodingFromJson(Decoder& dec, const Json& j);

Json BoothTallyJson(const Group& group, const BoothTally& tally);
std::optional<BoothTally> BoothTallyFromJson(Decoder& dec, const Json& j);

// Canonical byte strings hashed into event records.
Bytes CanonicalSignIn(const Group& group, const GroupElement& public_key,
                      const SchnorrProof& proof);
Bytes CanonicalMpc(const Group& group, const std::vector<GroupElement>& keys,
                   const VoteEncoding& encoding);
Bytes CanonicalBallot(const Group& group, const Ballot& ballot);
Bytes CanonicalShare(const Group& group, const RecoveryShare& share);
Bytes CanonicalTally(const Group& group, const BoothTally& tally);

// Serialize with sorted keys and no whitespace dependence.
std::string DumpJson(const Json& j);

}  // namespace sbl

#endif  // SBL_CODEC_HPP_
