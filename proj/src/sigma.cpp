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

#include "sigma.hpp"

#include "hashing.hpp"

namespace sbl {

namespace {

Bytes StringBytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

Bytes U32Bytes(uint32_t v) {
  Bytes out;
  AppendU32(out, v);
  return out;
}

}  // namespace

std::vector<Bytes> ProofContext::Items() const {
  return {StringBytes(election_id), U32Bytes(booth_id), StringBytes(voter_address),
          StringBytes(phase_tag)};
}

const char* ProofRejectName(ProofReject reason) {
  switch (reason) {
    case ProofReject::kNone: return "none";
    case ProofReject::kNonMember: return "non-member";
    case ProofReject::kEquation: return "equation";
    case ProofReject::kBranchCount: return "branch-count";
    case ProofReject::kChallengeSum: return "challenge-sum";
  }
  return "unknown";
}

Scalar SchnorrChallenge(const Group& group, const ProofContext& ctx, const GroupElement& public_key,
                        const GroupElement& commitment) {
  std::vector<Bytes> items = ctx.Items();
  items.push_back(group.EncodeElement(group.generator()));
  items.push_back(group.EncodeElement(public_key));
  items.push_back(group.EncodeElement(commitment));
  return group.HashToScalar(kSchnorrTag, items);
}

Scalar DleqChallenge(const Group& group, const ProofContext& ctx, const GroupElement& base_h,
                     const GroupElement& public_g, const GroupElement& public_h,
                     const GroupElement& commitment_g, const GroupElement& commitment_h) {
  std::vector<Bytes> items = ctx.Items();
  items.push_back(group.EncodeElement(group.generator()));
  items.push_back(group.EncodeElement(base_h));
  items.push_back(group.EncodeElement(public_g));
  items.push_back(group.EncodeElement(public_h));
  items.push_back(group.EncodeElement(commitment_g));
  items.push_back(group.EncodeElement(commitment_h));
  return group.HashToScalar(kDleqTag, items);
}

Scalar VoteChallenge(const Group& group, const ProofContext& ctx, const GroupElement& voter_key,
                     const GroupElement& mpc_key, const GroupElement& blinded,
                     const std::vector<VoteProofBranch>& branches) {
  std::vector<Bytes> items = ctx.Items();
  items.push_back(group.EncodeElement(group.generator()));
  items.push_back(group.EncodeElement(voter_key));
  items.push_back(group.EncodeElement(mpc_key));
  items.push_back(group.EncodeElement(blinded));
  for (const VoteProofBranch& b : branches) {
    items.push_back(group.EncodeElement(b.commitment_g));
    items.push_back(group.EncodeElement(b.commitment_y));
  }
  return group.HashToScalar(kVoteTag, items);
}

std::pair<GroupElement, SchnorrProof> ProveSchnorr(const Group& group, const ProofContext& ctx,
                                                   const Scalar& secret, Rng& rng) {
  GroupElement public_key = group.Exp(group.generator(), secret);
  Scalar w = group.RandomScalar(rng);
  GroupElement a = group.Exp(group.generator(), w);
  Scalar c = SchnorrChallenge(group, ctx, public_key, a);
  Scalar z = group.ScalarAdd(w, group.ScalarMul(c, secret));
  return {public_key, SchnorrProof{a, z}};
}

VerifyOutcome VerifySchnorr(const Group& group, const ProofContext& ctx,
                            const GroupElement& public_key, const SchnorrProof& proof) {
  if (!group.IsMember(public_key) || !group.IsMember(proof.commitment)) {
    return VerifyOutcome::Fail(ProofReject::kNonMember);
  }
  if (proof.response.value < 0 || proof.response.value >= group.q()) {
    return VerifyOutcome::Fail(ProofReject::kEquation);
  }
  Scalar c = SchnorrChallenge(group, ctx, public_key, proof.commitment);
  GroupElement lhs = group.ExpPublic(group.generator(), proof.response);
  GroupElement rhs = group.Mul(proof.commitment, group.ExpPublic(public_key, c));
  if (lhs != rhs) return VerifyOutcome::Fail(ProofReject::kEquation);
  return VerifyOutcome::Accept();
}

std::pair<DleqStatement, DleqProof> ProveDleq(const Group& group, const ProofContext& ctx,
                                              const Scalar& secret, const GroupElement& base_h,
                                              Rng& rng) {
  DleqStatement st;
  st.public_g = group.Exp(group.generator(), secret);
  st.public_h = group.Exp(base_h, secret);
  Scalar w = group.RandomScalar(rng);
  GroupElement a1 = group.Exp(group.generator(), w);
  GroupElement a2 = group.Exp(base_h, w);
  Scalar c = DleqChallenge(group, ctx, base_h, st.public_g, st.public_h, a1, a2);
  Scalar z = group.ScalarAdd(w, group.ScalarMul(c, secret));
  return {st, DleqProof{a1, a2, z}};
}

VerifyOutcome VerifyDleq(const Group& group, const ProofContext& ctx, const GroupElement& base_h,
                         const DleqStatement& statement, const DleqProof& proof) {
  if (!group.IsMember(base_h) || !group.IsMember(statement.public_g) ||
      !group.IsMember(statement.public_h) || !group.IsMember(proof.commitment_g) ||
      !group.IsMember(proof.commitment_h)) {
    return VerifyOutcome::Fail(ProofReject::kNonMember);
  }
  if (proof.response.value < 0 || proof.response.value >= group.q()) {
    return VerifyOutcome::Fail(ProofReject::kEquation);
  }
  Scalar c = DleqChallenge(group, ctx, base_h, statement.public_g, statement.public_h,
                           proof.commitment_g, proof.commitment_h);
  GroupElement lhs_g = group.ExpPublic(group.generator(), proof.response);
  GroupElement rhs_g = group.Mul(proof.commitment_g, group.ExpPublic(statement.public_g, c));
  if (lhs_g != rhs_g) return VerifyOutcome::Fail(ProofReject::kEquation);
  GroupElement lhs_h = group.ExpPublic(base_h, proof.response);
  GroupElement rhs_h = group.Mul(proof.commitment_h, group.ExpPublic(statement.public_h, c));
  if (lhs_h != rhs_h) return VerifyOutcome::Fail(ProofReject::kEquation);
  return VerifyOutcome::Accept();
}

std::pair<GroupElement, VoteProof> ProveVote(const Group& group, const ProofContext& ctx,
                                             const Scalar& secret, const GroupElement& mpc_key,
                                             uint32_t candidate,
                                             const std::vector<Scalar>& encodings, Rng& rng) {
  const size_t k = encodings.size();
  if (k == 0) throw Error("no candidates");
  if (candidate < 1 || candidate > k) throw Error("candidate out of range");
  if (!group.IsMember(mpc_key)) throw Error("mpc key not a group member");
  const size_t real = candidate - 1;

  GroupElement voter_key = group.Exp(group.generator(), secret);
  GroupElement blinded =
      group.Mul(group.Exp(mpc_key, secret), group.ExpPublic(group.generator(), encodings[real]));

  VoteProof proof;
  proof.branches.resize(k);
  GroupElement g_inv = group.Inverse(group.generator());
  GroupElement x_inv = group.Inverse(voter_key);

  // Simulate every branch except the real one with random (c_j, z_j).
  for (size_t j = 0; j < k; ++j) {
    if (j == real) continue;
    VoteProofBranch& b = proof.branches[j];
    b.challenge = group.RandomScalar(rng);
    b.response = group.RandomScalar(rng);
    // a1_j = g^z X^-c,  a2_j = Y^z D_j^-c  with  D_j = B g^-f(j).
    b.commitment_g = group.Mul(group.ExpPublic(group.generator(), b.response),
                               group.ExpPublic(x_inv, b.challenge));
    GroupElement d = group.Mul(blinded, group.ExpPublic(g_inv, encodings[j]));
    b.commitment_y = group.Mul(group.ExpPublic(mpc_key, b.response),
                               group.ExpPublic(group.Inverse(d), b.challenge));
  }

  Scalar w = group.RandomScalar(rng);
  proof.branches[real].commitment_g = group.Exp(group.generator(), w);
  proof.branches[real].commitment_y = group.Exp(mpc_key, w);

  Scalar total = VoteChallenge(group, ctx, voter_key, mpc_key, blinded, proof.branches);
  Scalar sum_fake{0};
  for (size_t j = 0; j < k; ++j) {
    if (j != real) sum_fake = group.ScalarAdd(sum_fake, proof.branches[j].challenge);
  }
  Scalar c_real = group.ScalarSub(total, sum_fake);
  proof.branches[real].challenge = c_real;
  proof.branches[real].response = group.ScalarAdd(w, group.ScalarMul(c_real, secret));
  return {blinded, proof};
}

VerifyOutcome VerifyVote(const Group& group, const ProofContext& ctx, const GroupElement& voter_key,
                         const GroupElement& mpc_key, const GroupElement& blinded,
                         const VoteProof& proof, const std::vector<Scalar>& encodings) {
  const size_t k = encodings.size();
  if (proof.branches.size() != k || k == 0) {
    return VerifyOutcome::Fail(ProofReject::kBranchCount);
  }
  if (!group.IsMember(voter_key) || !group.IsMember(mpc_key) || !group.IsMember(blinded)) {
    return VerifyOutcome::Fail(ProofReject::kNonMember);
  }
  for (size_t j = 0; j < k; ++j) {
    const VoteProofBranch& b = proof.branches[j];
    if (!group.IsMember(b.commitment_g) || !group.IsMember(b.commitment_y)) {
      return VerifyOutcome::Fail(ProofReject::kNonMember, static_cast<int>(j));
    }
    if (b.challenge.value < 0 || b.challenge.value >= group.q() || b.response.value < 0 ||
        b.response.value >= group.q()) {
      return VerifyOutcome::Fail(ProofReject::kEquation, static_cast<int>(j));
    }
  }

  Scalar total = VoteChallenge(group, ctx, voter_key, mpc_key, blinded, proof.branches);
  Scalar sum{0};
  for (const VoteProofBranch& b : proof.branches) sum = group.ScalarAdd(sum, b.challenge);
  if (sum != total) return VerifyOutcome::Fail(ProofReject::kChallengeSum);

  GroupElement g_inv = group.Inverse(group.generator());
  for (size_t j = 0; j < k; ++j) {
    const VoteProofBranch& b = proof.branches[j];
    // g^z == a1 X^c
    GroupElement lhs_g = group.ExpPublic(group.generator(), b.response);
    GroupElement rhs_g = group.Mul(b.commitment_g, group.ExpPublic(voter_key, b.challenge));
    if (lhs_g != rhs_g) return VerifyOutcome::Fail(ProofReject::kEquation, static_cast<int>(j));
    // Y^z == a2 (B g^-f(j))^c
    GroupElement d = group.Mul(blinded, group.ExpPublic(g_inv, encodings[j]));
    GroupElement lhs_y = group.ExpPublic(mpc_key, b.response);
    GroupElement rhs_y = group.Mul(b.commitment_y, group.ExpPublic(d, b.challenge));
    if (lhs_y != rhs_y) return VerifyOutcome::Fail(ProofReject::kEquation, static_cast<int>(j));
  }
  return VerifyOutcome::Accept();
}

#ifdef SBL_ENABLE_TEST_HOOKS
namespace testing {

SchnorrProof SchnorrWithNonce(const Group& group, const ProofContext& ctx, const Scalar& secret,
                              const Scalar& nonce, const std::optional<Scalar>& forced_challenge,
                              GroupElement* public_key_out, Scalar* challenge_out) {
  GroupElement public_key = group.Exp(group.generator(), secret);
  GroupElement a = group.ExpPublic(group.generator(), nonce);
  Scalar c = forced_challenge.has_value() ? *forced_challenge
                                          : SchnorrChallenge(group, ctx, public_key, a);
  Scalar z = group.ScalarAdd(nonce, group.ScalarMul(c, secret));
  if (public_key_out != nullptr) *public_key_out = public_key;
  if (challenge_out != nullptr) *challenge_out = c;
  return SchnorrProof{a, z};
}

DleqProof DleqWithNonce(const Group& group, const ProofContext& ctx, const Scalar& secret,
                        const GroupElement& base_h, const Scalar& nonce,
                        const std::optional<Scalar>& forced_challenge, DleqStatement* statement_out,
                        Scalar* challenge_out) {
  DleqStatement st;
  st.public_g = group.ExpPublic(group.generator(), secret);
  st.public_h = group.ExpPublic(base_h, secret);
  GroupElement a1 = group.ExpPublic(group.generator(), nonce);
  GroupElement a2 = group.ExpPublic(base_h, nonce);
  Scalar c = forced_challenge.has_value()
                 ? *forced_challenge
                 : DleqChallenge(group, ctx, base_h, st.public_g, st.public_h, a1, a2);
  Scalar z = group.ScalarAdd(nonce, group.ScalarMul(c, secret));
  if (statement_out != nullptr) *statement_out = st;
  if (challenge_out != nullptr) *challenge_out = c;
  return DleqProof{a1, a2, z};
}

}  // namespace testing
#endif  // SBL_ENABLE_TEST_HOOKS

}  // namespace sbl
