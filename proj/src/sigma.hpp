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
// Non-interactive sigma protocols, made non-interactive with a domain and
// context separated Fiat-Shamir challenge:
//   - Schnorr proof of knowledge of a discrete log
//   - Chaum-Pedersen equality of discrete logs across two bases
//   - disjunctive ("1-of-k") well-formedness proof for blinded ballots

#ifndef SBL_SIGMA_HPP_
#define SBL_SIGMA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "group.hpp"

namespace sbl {

inline constexpr std::string_view kSchnorrTag = "sbl/schnorr/v1";
inline constexpr std::string_view kDleqTag = "sbl/dleq/v1";
inline constexpr std::string_view kVoteTag = "sbl/vote/v1";

// Binds a proof to one election, booth, sender, and protocol phase, so a
// transcript artifact cannot be replayed anywhere else.
struct ProofContext {
  std::string election_id;
  uint32_t booth_id = 0;
  std::string voter_address;
  std::string phase_tag;

  std::vector<Bytes> Items() const;
};

struct SchnorrProof {
  GroupElement commitment;  // a = g^w
  Scalar response;          // z = w + c x

  bool operator==(const SchnorrProof&) const = default;
};

struct DleqProof {
  GroupElement commitment_g;  // a1 = g^w
  GroupElement commitment_h;  // a2 = h^w
  Scalar response;            // z = w + c x

  bool operator==(const DleqProof&) const = default;
};

struct VoteProofBranch {
  GroupElement commitment_g;  // a1_j
  GroupElement commitment_y;  // a2_j
  Scalar challenge;           // c_j
  Scalar response;            // z_j

  bool operator==(const VoteProofBranch&) const = default;
};

// One branch per candidate; branch challenges sum to the global challenge.
struct VoteProof {
  std::vector<VoteProofBranch> branches;

  bool operator==(const VoteProof&) const = default;
};

enum class ProofReject {
  kNone,
  kNonMember,
  kEquation,
  kBranchCount,
  kChallengeSum,
};

const char* ProofRejectName(ProofReject reason);

struct VerifyOutcome {
  bool ok = false;
  ProofReject reason = ProofReject::kNone;
  int branch = -1;  // offending branch for disjunctive proofs, -1 otherwise

  static VerifyOutcome Accept() { return {true, ProofReject::kNone, -1}; }
  static VerifyOutcome Fail(ProofReject r, int branch = -1) { return {false, r, branch}; }
};

// Challenge recomputation, shared between provers and verifiers.
Scalar SchnorrChallenge(const Group& group, const ProofContext& ctx, const GroupElement& public_key,
                        const GroupElement& commitment);
Scalar DleqChallenge(const Group& group, const ProofContext& ctx, const GroupElement& base_h,
                     const GroupElement& public_g, const GroupElement& public_h,
                     const GroupElement& commitment_g, const GroupElement& commitment_h);
Scalar VoteChallenge(const Group& group, const ProofContext& ctx, const GroupElement& voter_key,
                     const GroupElement& mpc_key, const GroupElement& blinded,
                     const std::vector<VoteProofBranch>& branches);

// Proves knowledge of x for X = g^x.  Returns X alongside the proof.
std::pair<GroupElement, SchnorrProof> ProveSchnorr(const Group& group, const ProofContext& ctx,
                                                   const Scalar& secret, Rng& rng);
VerifyOutcome VerifySchnorr(const Group& group, const ProofContext& ctx,
                            const GroupElement& public_key, const SchnorrProof& proof);

// Proves log_g(X) = log_h(R) = x.  Returns (X, R) alongside the proof.
struct DleqStatement {
  GroupElement public_g;  // X = g^x
  GroupElement public_h;  // R = h^x
};
std::pair<DleqStatement, DleqProof> ProveDleq(const Group& group, const ProofContext& ctx,
                                              const Scalar& secret, const GroupElement& base_h,
                                              Rng& rng);
VerifyOutcome VerifyDleq(const Group& group, const ProofContext& ctx, const GroupElement& base_h,
                         const DleqStatement& statement, const DleqProof& proof);

// Proves B = Y^x g^(encodings[v-1]) for some v in [1, k] without revealing
// which, where X = g^x is the prover's signed-in key.  Simulated branches
// come first in commitment order; the real branch is patched afterwards.
std::pair<GroupElement, VoteProof> ProveVote(const Group& group, const ProofContext& ctx,
                                             const Scalar& secret, const GroupElement& mpc_key,
                                             uint32_t candidate,
                                             const std::vector<Scalar>& encodings, Rng& rng);
VerifyOutcome VerifyVote(const Group& group, const ProofContext& ctx, const GroupElement& voter_key,
                         const GroupElement& mpc_key, const GroupElement& blinded,
                         const VoteProof& proof, const std::vector<Scalar>& encodings);

#ifdef SBL_ENABLE_TEST_HOOKS
namespace testing {

// Deterministic provers with injected nonces and optional forced
// challenges.  Exercise special soundness and the worked examples; the
// public API never exposes nonce control.
SchnorrProof SchnorrWithNonce(const Group& group, const ProofContext& ctx, const Scalar& secret,
                              const Scalar& nonce, const std::optional<Scalar>& forced_challenge,
                              GroupElement* public_key_out, Scalar* challenge_out);
DleqProof DleqWithNonce(const Group& group, const ProofContext& ctx, const Scalar& secret,
                        const GroupElement& base_h, const Scalar& nonce,
                        const std::optional<Scalar>& forced_challenge, DleqStatement* statement_out,
                        Scalar* challenge_out);

}  // namespace testing
#endif  // SBL_ENABLE_TEST_HOOKS

}  // namespace sbl

#endif  // SBL_SIGMA_HPP_
