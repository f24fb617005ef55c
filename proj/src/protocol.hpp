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
// Voting protocol operations on top of the group and sigma layers: voter
// key material, pairwise-cancelling blinding keys, exponent-packed vote
// encodings, ballots, recovery shares, and tally decoding.  The product of
// all blinding keys raised to the voters' secrets telescopes to one, which
// is what makes the tally self-computable once every ballot is in.

#ifndef SBL_PROTOCOL_HPP_
#define SBL_PROTOCOL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sigma.hpp"

namespace sbl {

inline constexpr std::string_view kPhaseTagSignIn = "signin";
inline constexpr std::string_view kPhaseTagVote = "vote";
inline constexpr std::string_view kPhaseTagRecovery = "recovery";

struct VoterKeyMaterial {
  Scalar secret;
  GroupElement public_key;
  SchnorrProof signin_proof;
};

// Fresh secret plus a sign-in proof bound to ctx.
VoterKeyMaterial Keygen(const Group& group, const ProofContext& ctx, Rng& rng);

// Same, but with a caller-chosen secret (deterministic replays).
VoterKeyMaterial KeyMaterialFromSecret(const Group& group, const ProofContext& ctx,
                                       const Scalar& secret, Rng& rng);

struct RosterEntry {
  std::string address;
  GroupElement public_key;
};

// Append-only sign-in order; indices are 1-based throughout.
class BoothRoster {
 public:
  bool Add(const std::string& address, const GroupElement& public_key);
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const RosterEntry& entry(size_t index_1based) const;
  std::optional<size_t> IndexOf(const std::string& address) const;
  const std::vector<RosterEntry>& entries() const { return entries_; }

 private:
  std::vector<RosterEntry> entries_;
  std::map<std::string, size_t> by_address_;
};

// Y_i = (prod_{j<i} X_j) / (prod_{j>i} X_j); one entry per roster index.
std::vector<GroupElement> DeriveMpcKeys(const Group& group, const BoothRoster& roster);

// Packed vote encoding f(j) = 2^((j-1) m) with m = ceil(log2(n + 1)).
// Candidate counts occupy disjoint m-bit fields of the packed sum.
struct VoteEncoding {
  uint32_t candidates = 0;
  uint32_t bits_per_candidate = 0;

  mpz_class ExponentInt(uint32_t candidate_1based) const;
  Scalar Exponent(const Group& group, uint32_t candidate_1based) const;
  std::vector<Scalar> AllExponents(const Group& group) const;

  mpz_class Pack(const std::vector<uint64_t>& counts) const;
  std::vector<uint64_t> Unpack(const mpz_class& packed) const;

  bool operator==(const VoteEncoding&) const = default;
};

// Throws CapacityError when k * m bits do not fit below capacity_bits.
VoteEncoding MakeEncoding(uint32_t roster_size, uint32_t candidates, uint32_t capacity_bits);

struct Ballot {
  std::string address;
  GroupElement blinded;
  VoteProof proof;
};

Ballot CastBallot(const Group& group, const ProofContext& ctx, const VoterKeyMaterial& key,
                  const GroupElement& mpc_key, uint32_t candidate, const VoteEncoding& encoding,
                  Rng& rng);

// Recovery base for voter i once the absent set is fixed:
//   h_i = (prod_{j in absent, j<i} X_j) / (prod_{j in absent, j>i} X_j).
// Throws if i is absent or any index is outside the roster.
GroupElement RecoveryBase(const Group& group, const BoothRoster& roster,
                          const std::set<uint32_t>& absent, uint32_t index_1based);

Bytes AbsentSetHash(const std::set<uint32_t>& absent);

struct RecoveryShare {
  std::string address;
  GroupElement share;               // R_i = h_i^{x_i}
  std::optional<DleqProof> proof;   // absent when h_i is the identity
  Bytes absent_hash;                // binds the share to one absent set
};

RecoveryShare MakeRecoveryShare(const Group& group, const ProofContext& ctx,
                                const VoterKeyMaterial& key, const BoothRoster& roster,
                                const std::set<uint32_t>& absent, uint32_t index_1based, Rng& rng);

// Accepts iff the share is consistent with the voter's key, the recovery
// base derived from (roster, absent), and the absent-set hash.
VerifyOutcome VerifyRecoveryShare(const Group& group, const ProofContext& ctx,
                                  const BoothRoster& roster, const std::set<uint32_t>& absent,
                                  uint32_t index_1based, const GroupElement& voter_key,
                                  const RecoveryShare& share);

// T = (prod of blinded ballots) * (prod of shares)^-1.  Empty input gives
// the identity.
GroupElement TallyProduct(const Group& group, const std::vector<Ballot>& ballots,
                          const std::vector<RecoveryShare>& shares);

struct BoothTally {
  uint32_t booth_id = 0;
  uint64_t ballots_counted = 0;
  std::vector<uint64_t> counts;
  mpz_class packed;
  GroupElement tally;

  bool operator==(const BoothTally&) const = default;
};

// Recovers the per-candidate counts from T = g^S given the number of
// counted ballots.  Returns nullopt when no valid count vector exists.
std::optional<std::vector<uint64_t>> DecodeTally(const Group& group, const GroupElement& tally,
                                                 uint64_t ballots_counted,
                                                 const VoteEncoding& encoding);

enum class BoothStatus { kClosed, kAborted };

struct BoothOutcome {
  uint32_t booth_id = 0;
  BoothStatus status = BoothStatus::kAborted;
  std::optional<BoothTally> tally;  // present iff closed
};

struct ElectionResult {
  std::vector<uint64_t> totals;
  std::vector<uint32_t> counted_booths;
  std::vector<uint32_t> aborted_booths;
  bool partial = false;

  bool operator==(const ElectionResult&) const = default;
};

// Sums closed-booth counts; aborted booths mark the result partial.
ElectionResult Aggregate(const std::vector<BoothOutcome>& outcomes, uint32_t candidates);

}  // namespace sbl

#endif  // SBL_PROTOCOL_HPP_
