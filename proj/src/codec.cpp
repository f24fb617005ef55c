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

#include "codec.hpp"

#include "hashing.hpp"

namespace sbl {

void Decoder::Malformed(const std::string& why) {
  if (!Failed()) {
    fail = DecodeFail::kMalformed;
    detail = why;
  }
}

void Decoder::NonMember(const std::string& where) {
  if (!Failed()) {
    fail = DecodeFail::kNonMember;
    detail = where;
  }
}

std::optional<GroupElement> Decoder::Element(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_string()) {
    Malformed(std::string("missing element field ") + field);
    return std::nullopt;
  }
  Bytes bytes;
  if (!HexDecode(j[field].get<std::string>(), &bytes) || bytes.size() != group.element_bytes()) {
    Malformed(std::string("bad element hex in ") + field);
    return std::nullopt;
  }
  auto decoded = group.DecodeElement(bytes);
  if (!decoded.has_value()) {
    NonMember(std::string("element field ") + field);
    return std::nullopt;
  }
  return decoded;
}

std::optional<Scalar> Decoder::ScalarField(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_string()) {
    Malformed(std::string("missing scalar field ") + field);
    return std::nullopt;
  }
  Bytes bytes;
  if (!HexDecode(j[field].get<std::string>(), &bytes) || bytes.size() != group.scalar_bytes()) {
    Malformed(std::string("bad scalar hex in ") + field);
    return std::nullopt;
  }
  auto decoded = group.DecodeScalar(bytes);
  if (!decoded.has_value()) {
    Malformed(std::string("scalar out of range in ") + field);
    return std::nullopt;
  }
  return decoded;
}

std::optional<Bytes> Decoder::HexField(const Json& j, const char* field, size_t expect_len) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_string()) {
    Malformed(std::string("missing hex field ") + field);
    return std::nullopt;
  }
  Bytes bytes;
  if (!HexDecode(j[field].get<std::string>(), &bytes)) {
    Malformed(std::string("bad hex in ") + field);
    return std::nullopt;
  }
  if (expect_len != 0 && bytes.size() != expect_len) {
    Malformed(std::string("wrong length in ") + field);
    return std::nullopt;
  }
  return bytes;
}

std::optional<uint64_t> Decoder::U64Field(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_number_unsigned()) {
    Malformed(std::string("missing unsigned field ") + field);
    return std::nullopt;
  }
  return j[field].get<uint64_t>();
}

std::optional<std::string> Decoder::StringField(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_string()) {
    Malformed(std::string("missing string field ") + field);
    return std::nullopt;
  }
  return j[field].get<std::string>();
}

Json ElementJson(const Group& group, const GroupElement& e) { return group.ElementHex(e); }

Json ScalarJson(const Group& group, const Scalar& s) { return group.ScalarHex(s); }

Json SchnorrProofJson(const Group& group, const SchnorrProof& proof) {
  return Json{{"a", ElementJson(group, proof.commitment)},
              {"z", ScalarJson(group, proof.response)}};
}

std::optional<SchnorrProof> SchnorrProofFromJson(Decoder& dec, const Json& j) {
  auto a = dec.Element(j, "a");
  auto z = dec.ScalarField(j, "z");
  if (!a || !z) return std::nullopt;
  return SchnorrProof{*a, *z};
}

Json DleqProofJson(const Group& group, const DleqProof& proof) {
  return Json{{"a1", ElementJson(group, proof.commitment_g)},
              {"a2", ElementJson(group, proof.commitment_h)},
              {"z", ScalarJson(group, proof.response)}};
}

std::optional<DleqProof> DleqProofFromJson(Decoder& dec, const Json& j) {
  auto a1 = dec.Element(j, "a1");
  auto a2 = dec.Element(j, "a2");
  auto z = dec.ScalarField(j, "z");
  if (!a1 || !a2 || !z) return std::nullopt;
  return DleqProof{*a1, *a2, *z};
}

Json VoteProofJson(const Group& group, const VoteProof& proof) {
  Json branches = Json::array();
  for (const VoteProofBranch& b : proof.branches) {
    branches.push_back(Json{{"a1", ElementJson(group, b.commitment_g)},
                            {"a2", ElementJson(group, b.commitment_y)},
                            {"c", ScalarJson(group, b.challenge)},
                            {"z", ScalarJson(group, b.response)}});
  }
  return Json{{"branches", branches}};
}

std::optional<VoteProof> VoteProofFromJson(Decoder& dec, const Json& j) {
  if (!j.is_object() || !j.contains("branches") || !j["branches"].is_array()) {
    dec.Malformed("missing branches");
    return std::nullopt;
  }
  VoteProof proof;
  for (const Json& bj : j["branches"]) {
    auto a1 = dec.Element(bj, "a1");
    auto a2 = dec.Element(bj, "a2");
    auto c = dec.ScalarField(bj, "c");
    auto z = dec.ScalarField(bj, "z");
    if (!a1 || !a2 || !c || !z) return std::nullopt;
    proof.branches.push_back(VoteProofBranch{*a1, *a2, *c, *z});
  }
  return proof;
}

Json BallotJson(const Group& group, const Ballot& ballot) {
  return Json{{"address", ballot.address},
              {"b", ElementJson(group, ballot.blinded)},
              {"proof", VoteProofJson(group, ballot.proof)}};
}

std::optional<Ballot> BallotFromJson(Decoder& dec, const Json& j) {
  auto address = dec.StringField(j, "address");
  auto b = dec.Element(j, "b");
  if (!address || !b) return std::nullopt;
  if (!j.contains("proof")) {
    dec.Malformed("missing ballot proof");
    return std::nullopt;
  }
  auto proof = VoteProofFromJson(dec, j["proof"]);
  if (!proof) return std::nullopt;
  return Ballot{*address, *b, std::move(*proof)};
}

Json RecoveryShareJson(const Group& group, const RecoveryShare& share) {
  Json j{{"address", share.address},
         {"r", ElementJson(group, share.share)},
         {"absent_hash", HexEncode(share.absent_hash)}};
  if (share.proof.has_value()) j["proof"] = DleqProofJson(group, *share.proof);
  return j;
}

std::optional<RecoveryShare> RecoveryShareFromJson(Decoder& dec, const Json& j) {
  auto address = dec.StringField(j, "address");
  auto r = dec.Element(j, "r");
  auto hash = dec.HexField(j, "absent_hash", 32);
  if (!address || !r || !hash) return std::nullopt;
  RecoveryShare share;
  share.address = *address;
  share.share = *r;
  share.absent_hash = *hash;
  if (j.contains("proof")) {
    auto proof = DleqProofFromJson(dec, j["proof"]);
    if (!proof) return std::nullopt;
    share.proof = *proof;
  }
  return share;
}

Json VoteEncodingJson(const VoteEncoding& encoding) {
  return Json{{"candidates", encoding.candidates}, {"bits", encoding.bits_per_candidate}};
}

std::optional<VoteEncoding> VoteEncodingFromJson(Decoder& dec, const Json& j) {
  auto candidates = dec.U64Field(j, "candidates");
  auto bits = dec.U64Field(j, "bits");
  if (!candidates || !bits) return std::nullopt;
  if (*candidates == 0 || *candidates > 4096 || *bits == 0 || *bits > 64) {
    dec.Malformed("encoding out of range");
    return std::nullopt;
  }
  return VoteEncoding{static_cast<uint32_t>(*candidates), static_cast<uint32_t>(*bits)};
}

namespace {

std::string MpzHex(const mpz_class& v) {
  std::string hex = v.get_str(16);
  if (hex.size() % 2 != 0) hex.insert(hex.begin(), '0');
  return hex;
}

std::optional<mpz_class> MpzFromHexField(Decoder& dec, const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_string()) {
    dec.Malformed(std::string("missing field ") + field);
    return std::nullopt;
  }
  std::string hex = j[field].get<std::string>();
  Bytes bytes;
  if (hex.empty() || hex.size() > 8192 || !HexDecode(hex, &bytes)) {
    dec.Malformed(std::string("bad hex in ") + field);
    return std::nullopt;
  }
  return MpzFromBytes(bytes);
}

}  // namespace

Json BoothTallyJson(const Group& group, const BoothTally& tally) {
  Json counts = Json::array();
  for (uint64_t c : tally.counts) counts.push_back(c);
  return Json{{"booth", tally.booth_id},
              {"ballots", tally.ballots_counted},
              {"counts", counts},
              {"s", MpzHex(tally.packed)},
              {"t", ElementJson(group, tally.tally)}};
}

std::optional<BoothTally> BoothTallyFromJson(Decoder& dec, const Json& j) {
  auto booth = dec.U64Field(j, "booth");
  auto ballots = dec.U64Field(j, "ballots");
  auto t = dec.Element(j, "t");
  auto s = MpzFromHexField(dec, j, "s");
  if (!booth || !ballots || !t || !s) return std::nullopt;
  if (!j.contains("counts") || !j["counts"].is_array()) {
    dec.Malformed("missing counts");
    return std::nullopt;
  }
  BoothTally tally;
  tally.booth_id = static_cast<uint32_t>(*booth);
  tally.ballots_counted = *ballots;
  for (const Json& c : j["counts"]) {
    if (!c.is_number_unsigned()) {
      dec.Malformed("bad count entry");
      return std::nullopt;
    }
    tally.counts.push_back(c.get<uint64_t>());
  }
  tally.packed = *s;
  tally.tally = *t;
  return tally;
}

Bytes CanonicalSignIn(const Group& group, const GroupElement& public_key,
                      const SchnorrProof& proof) {
  std::vector<Bytes> items{group.EncodeElement(public_key), group.EncodeElement(proof.commitment),
                           group.EncodeScalar(proof.response)};
  return EncodeByteList("signin", items);
}

Bytes CanonicalMpc(const Group& group, const std::vector<GroupElement>& keys,
                   const VoteEncoding& encoding) {
  std::vector<Bytes> items;
  items.reserve(keys.size() + 1);
  Bytes enc;
  AppendU32(enc, encoding.candidates);
  AppendU32(enc, encoding.bits_per_candidate);
  items.push_back(enc);
  for (const GroupElement& k : keys) items.push_back(group.EncodeElement(k));
  return EncodeByteList("mpc", items);
}

Bytes CanonicalBallot(const Group& group, const Ballot& ballot) {
  std::vector<Bytes> items;
  items.push_back(Bytes(ballot.address.begin(), ballot.address.end()));
  items.push_back(group.EncodeElement(ballot.blinded));
  for (const VoteProofBranch& b : ballot.proof.branches) {
    items.push_back(group.EncodeElement(b.commitment_g));
    items.push_back(group.EncodeElement(b.commitment_y));
    items.push_back(group.EncodeScalar(b.challenge));
    items.push_back(group.EncodeScalar(b.response));
  }
  return EncodeByteList("ballot", items);
}

Bytes CanonicalShare(const Group& group, const RecoveryShare& share) {
  std::vector<Bytes> items;
  items.push_back(Bytes(share.address.begin(), share.address.end()));
  items.push_back(group.EncodeElement(share.share));
  items.push_back(share.absent_hash);
  if (share.proof.has_value()) {
    items.push_back(group.EncodeElement(share.proof->commitment_g));
    items.push_back(group.EncodeElement(share.proof->commitment_h));
    items.push_back(group.EncodeScalar(share.proof->response));
  }
  return EncodeByteList("share", items);
}

Bytes CanonicalTally(const Group& group, const BoothTally& tally) {
  std::vector<Bytes> items;
  Bytes head;
  AppendU32(head, tally.booth_id);
  AppendU64(head, tally.ballots_counted);
  items.push_back(head);
  Bytes counts;
  for (uint64_t c : tally.counts) AppendU64(counts, c);
  items.push_back(counts);
  std::string s_hex = MpzHex(tally.packed);
  Bytes s_bytes;
  HexDecode(s_hex, &s_bytes);
  items.push_back(s_bytes);
  items.push_back(group.EncodeElement(tally.tally));
  return EncodeByteList("tally", items);
}

std::string DumpJson(const Json& j) { return j.dump(); }

}  // namespace sbl
