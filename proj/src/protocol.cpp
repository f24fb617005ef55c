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

#include "protocol.hpp"

#include <algorithm>
#include <unordered_map>

#include "hashing.hpp"

namespace sbl {

VoterKeyMaterial Keygen(const Group& group, const ProofContext& ctx, Rng& rng) {
  return KeyMaterialFromSecret(group, ctx, group.RandomScalar(rng), rng);
}

VoterKeyMaterial KeyMaterialFromSecret(const Group& group, const ProofContext& ctx,
                                       const Scalar& secret, Rng& rng) {
  if (secret.value <= 0 || secret.value >= group.q()) throw Error("secret out of range");
  auto [public_key, proof] = ProveSchnorr(group, ctx, secret, rng);
  return VoterKeyMaterial{secret, public_key, proof};
}

bool BoothRoster::Add(const std::string& address, const GroupElement& public_key) {
  if (by_address_.contains(address)) return false;
  entries_.push_back(RosterEntry{address, public_key});
  by_address_[address] = entries_.size();
  return true;
}

const RosterEntry& BoothRoster::entry(size_t index_1based) const {
  if (index_1based < 1 || index_1based > entries_.size()) throw Error("roster index out of range");
  return entries_[index_1based - 1];
}

std::optional<size_t> BoothRoster::IndexOf(const std::string& address) const {
  auto it = by_address_.find(address);
  if (it == by_address_.end()) return std::nullopt;
  return it->second;
}

std::vector<GroupElement> DeriveMpcKeys(const Group& group, const BoothRoster& roster) {
  const size_t n = roster.size();
  std::vector<GroupElement> keys(n, group.identity());
  if (n == 0) return keys;
  // prefix[i] = prod_{j<=i} X_j, suffix[i] = prod_{j>=i} X_j (1-based).
  std::vector<GroupElement> prefix(n + 1, group.identity());
  std::vector<GroupElement> suffix(n + 2, group.identity());
  for (size_t i = 1; i <= n; ++i) prefix[i] = group.Mul(prefix[i - 1], roster.entry(i).public_key);
  for (size_t i = n; i >= 1; --i) suffix[i] = group.Mul(suffix[i + 1], roster.entry(i).public_key);
  for (size_t i = 1; i <= n; ++i) {
    keys[i - 1] = group.Mul(prefix[i - 1], group.Inverse(suffix[i + 1]));
  }
  return keys;
}

mpz_class VoteEncoding::ExponentInt(uint32_t candidate_1based) const {
  if (candidate_1based < 1 || candidate_1based > candidates) throw Error("candidate out of range");
  mpz_class f = 1;
  f <<= static_cast<unsigned long>(bits_per_candidate) * (candidate_1based - 1);
  return f;
}

Scalar VoteEncoding::Exponent(const Group& group, uint32_t candidate_1based) const {
  return group.ScalarFromMpz(ExponentInt(candidate_1based));
}

std::vector<Scalar> VoteEncoding::AllExponents(const Group& group) const {
  std::vector<Scalar> out;
  out.reserve(candidates);
  for (uint32_t j = 1; j <= candidates; ++j) out.push_back(Exponent(group, j));
  return out;
}

mpz_class VoteEncoding::Pack(const std::vector<uint64_t>& counts) const {
  if (counts.size() != candidates) throw Error("count vector size mismatch");
  mpz_class packed = 0;
  for (uint32_t j = candidates; j >= 1; --j) {
    packed <<= bits_per_candidate;
    packed += static_cast<unsigned long>(counts[j - 1]);
  }
  return packed;
}

std::vector<uint64_t> VoteEncoding::Unpack(const mpz_class& packed) const {
  std::vector<uint64_t> counts(candidates, 0);
  mpz_class rest = packed;
  mpz_class mask = (mpz_class(1) << bits_per_candidate) - 1;
  for (uint32_t j = 0; j < candidates; ++j) {
    mpz_class field = rest & mask;
    counts[j] = field.get_ui();
    rest >>= bits_per_candidate;
  }
  return counts;
}

VoteEncoding MakeEncoding(uint32_t roster_size, uint32_t candidates, uint32_t capacity_bits) {
  if (candidates == 0) throw ConfigError("no candidates");
  uint32_t m = 1;
  while ((uint64_t{1} << m) < uint64_t{roster_size} + 1) ++m;
  uint64_t needed = uint64_t{candidates} * m;
  if (needed >= capacity_bits) {
    throw CapacityError("packed tally needs " + std::to_string(needed) +
                        " bits but capacity is " + std::to_string(capacity_bits));
  }
  return VoteEncoding{candidates, m};
}

Ballot CastBallot(const Group& group, const ProofContext& ctx, const VoterKeyMaterial& key,
                  const GroupElement& mpc_key, uint32_t candidate, const VoteEncoding& encoding,
                  Rng& rng) {
  std::vector<Scalar> exponents = encoding.AllExponents(group);
  auto [blinded, proof] = ProveVote(group, ctx, key.secret, mpc_key, candidate, exponents, rng);
  return Ballot{ctx.voter_address, blinded, std::move(proof)};
}

GroupElement RecoveryBase(const Group& group, const BoothRoster& roster,
                          const std::set<uint32_t>& absent, uint32_t index_1based) {
  if (index_1based < 1 || index_1based > roster.size()) throw Error("index out of range");
  if (absent.contains(index_1based)) throw Error("absent voter has no recovery base");
  GroupElement low = group.identity();
  GroupElement high = group.identity();
  for (uint32_t j : absent) {
    if (j < 1 || j > roster.size()) throw Error("absent index out of range");
    if (j < index_1based) {
      low = group.Mul(low, roster.entry(j).public_key);
    } else {
      high = group.Mul(high, roster.entry(j).public_key);
    }
  }
  return group.Mul(low, group.Inverse(high));
}

Bytes AbsentSetHash(const std::set<uint32_t>& absent) {
  Bytes data;
  AppendU32(data, static_cast<uint32_t>(absent.size()));
  for (uint32_t j : absent) AppendU32(data, j);
  Digest d = Sha256(data);
  return Bytes(d.begin(), d.end());
}

RecoveryShare MakeRecoveryShare(const Group& group, const ProofContext& ctx,
                                const VoterKeyMaterial& key, const BoothRoster& roster,
                                const std::set<uint32_t>& absent, uint32_t index_1based, Rng& rng) {
  GroupElement base = RecoveryBase(group, roster, absent, index_1based);
  RecoveryShare out;
  out.address = roster.entry(index_1based).address;
  out.absent_hash = AbsentSetHash(absent);
  if (group.IsIdentity(base)) {
    // Degenerate base: the share is forced to the identity and there is
    // no discrete-log statement left to prove.
    out.share = group.identity();
    return out;
  }
  auto [statement, proof] = ProveDleq(group, ctx, key.secret, base, rng);
  out.share = statement.public_h;
  out.proof = proof;
  return out;
}

VerifyOutcome VerifyRecoveryShare(const Group& group, const ProofContext& ctx,
                                  const BoothRoster& roster, const std::set<uint32_t>& absent,
                                  uint32_t index_1based, const GroupElement& voter_key,
                                  const RecoveryShare& share) {
  if (share.absent_hash != AbsentSetHash(absent)) {
    return VerifyOutcome::Fail(ProofReject::kEquation);
  }
  GroupElement base = RecoveryBase(group, roster, absent, index_1based);
  if (group.IsIdentity(base)) {
    if (!group.IsIdentity(share.share) || share.proof.has_value()) {
      return VerifyOutcome::Fail(ProofReject::kEquation);
    }
    return VerifyOutcome::Accept();
  }
  if (!share.proof.has_value()) return VerifyOutcome::Fail(ProofReject::kEquation);
  return VerifyDleq(group, ctx, base, DleqStatement{voter_key, share.share}, *share.proof);
}

GroupElement TallyProduct(const Group& group, const std::vector<Ballot>& ballots,
                          const std::vector<RecoveryShare>& shares) {
  GroupElement acc = group.identity();
  for (const Ballot& b : ballots) acc = group.Mul(acc, b.blinded);
  GroupElement correction = group.identity();
  for (const RecoveryShare& s : shares) correction = group.Mul(correction, s.share);
  return group.Mul(acc, group.Inverse(correction));
}

namespace {

// Number of count vectors with the given sum; caps at limit.
uint64_t CompositionCount(uint64_t sum, uint32_t parts, uint64_t limit) {
  // C(sum + parts - 1, parts - 1) computed incrementally.
  if (parts <= 1) return 1;
  mpz_class acc = 1;
  for (uint32_t i = 1; i < parts; ++i) {
    acc *= sum + i;
    acc /= i;
    if (acc > limit) return limit + 1;
  }
  return acc.get_ui();
}

// Depth-first walk over count vectors summing to the ballot total, with
// the running group element maintained incrementally.  Returns the first
// match in lexicographic order.
class SumSearch {
 public:
  SumSearch(const Group& group, const GroupElement& target, uint64_t total,
            const VoteEncoding& encoding)
      : group_(group), target_(target), total_(total), k_(encoding.candidates) {
    steps_.reserve(k_);
    for (uint32_t j = 1; j <= k_; ++j) {
      steps_.push_back(group_.ExpPublic(group_.generator(), encoding.ExponentInt(j)));
    }
  }

  std::optional<std::vector<uint64_t>> Run() {
    // Last-candidate powers g^(f_k * r) for r in [0, total].
    last_powers_.assign(static_cast<size_t>(total_) + 1, group_.identity());
    for (size_t r = 1; r <= total_; ++r) {
      last_powers_[r] = group_.Mul(last_powers_[r - 1], steps_[k_ - 1]);
    }
    current_.assign(k_, 0);
    found_.reset();
    Walk(0, total_, group_.identity());
    return found_;
  }

 private:
  void Walk(uint32_t level, uint64_t remaining, GroupElement acc) {
    if (found_.has_value()) return;
    if (level == k_ - 1) {
      current_[level] = remaining;
      if (group_.Mul(acc, last_powers_[static_cast<size_t>(remaining)]) == target_) {
        found_ = current_;
      }
      return;
    }
    GroupElement walker = acc;
    for (uint64_t c = 0; c <= remaining; ++c) {
      current_[level] = c;
      Walk(level + 1, remaining - c, walker);
      if (found_.has_value()) return;
      walker = group_.Mul(walker, steps_[level]);
    }
  }

  const Group& group_;
  GroupElement target_;
  uint64_t total_;
  uint32_t k_;
  std::vector<GroupElement> steps_;
  std::vector<GroupElement> last_powers_;
  std::vector<uint64_t> current_;
  std::optional<std::vector<uint64_t>> found_;
};

// Meet-in-the-middle over a front/back candidate split: tabulate partial
// products of the front half keyed by (partial sum, element bytes), then
// walk the back half looking up the complement.  Still restricted to the
// sum slice, so memory is C(total + front, front) entries.
class MitmSearch {
 public:
  MitmSearch(const Group& group, const GroupElement& target, uint64_t total,
             const VoteEncoding& encoding)
      : group_(group), target_(target), total_(total), k_(encoding.candidates) {
    front_ = k_ / 2;
    for (uint32_t j = 1; j <= k_; ++j) {
      steps_.push_back(group_.ExpPublic(group_.generator(), encoding.ExponentInt(j)));
      inv_steps_.push_back(group_.Inverse(steps_.back()));
    }
  }

  std::optional<std::vector<uint64_t>> Run() {
    BuildFrontTable();
    back_counts_.assign(k_ - front_, 0);
    matches_.clear();
    GroupElement start = target_;
    WalkBack(0, total_, start);
    if (matches_.empty()) return std::nullopt;
    return *std::min_element(matches_.begin(), matches_.end());
  }

 private:
  void BuildFrontTable() {
    front_counts_.assign(front_, 0);
    FrontWalk(0, total_, group_.identity());
  }

  void FrontWalk(uint32_t level, uint64_t remaining, GroupElement acc) {
    if (level == front_) {
      uint64_t used = total_ - remaining;
      std::string key = FrontKey(used, acc);
      table_.emplace(std::move(key), front_counts_);  // first insert wins
      return;
    }
    GroupElement walker = acc;
    for (uint64_t c = 0; c <= remaining; ++c) {
      front_counts_[level] = c;
      FrontWalk(level + 1, remaining - c, walker);
      walker = group_.Mul(walker, steps_[level]);
    }
  }

  std::string FrontKey(uint64_t sum, const GroupElement& e) const {
    Bytes bytes = group_.EncodeElement(e);
    AppendU64(bytes, sum);
    return std::string(bytes.begin(), bytes.end());
  }

  // acc = target * (back partial product)^-1, maintained with inverse steps.
  void WalkBack(uint32_t level, uint64_t remaining, GroupElement acc) {
    const uint32_t back = k_ - front_;
    if (level == back) {
      // The front half must contribute exactly the unused remainder.
      auto it = table_.find(FrontKey(remaining, acc));
      if (it != table_.end()) {
        std::vector<uint64_t> full = it->second;
        full.insert(full.end(), back_counts_.begin(), back_counts_.end());
        matches_.push_back(std::move(full));
      }
      return;
    }
    GroupElement walker = acc;
    for (uint64_t c = 0; c <= remaining; ++c) {
      back_counts_[level] = c;
      WalkBack(level + 1, remaining - c, walker);
      walker = group_.Mul(walker, inv_steps_[front_ + level]);
    }
  }

  const Group& group_;
  GroupElement target_;
  uint64_t total_;
  uint32_t k_;
  uint32_t front_;
  std::vector<GroupElement> steps_;
  std::vector<GroupElement> inv_steps_;
  std::vector<uint64_t> front_counts_;
  std::vector<uint64_t> back_counts_;
  std::unordered_map<std::string, std::vector<uint64_t>> table_;
  std::vector<std::vector<uint64_t>> matches_;
};

constexpr uint64_t kPlainSearchLimit = 200000;

}  // namespace

std::optional<std::vector<uint64_t>> DecodeTally(const Group& group, const GroupElement& tally,
                                                 uint64_t ballots_counted,
                                                 const VoteEncoding& encoding) {
  const uint64_t km = uint64_t{encoding.candidates} * encoding.bits_per_candidate;

  // Small packed domain: direct discrete log, then a sum sanity check.
  if (km <= 32) {
    uint64_t bound = uint64_t{1} << km;
    auto packed = group.DlogBounded(group.generator(), tally, bound);
    if (packed.has_value()) {
      std::vector<uint64_t> counts = encoding.Unpack(mpz_class(static_cast<unsigned long>(*packed)));
      uint64_t sum = 0;
      for (uint64_t c : counts) sum += c;
      if (sum == ballots_counted) return counts;
      // Wraparound or corruption; fall through to the constrained search.
    }
  }

  uint64_t combos = CompositionCount(ballots_counted, encoding.candidates, kPlainSearchLimit);
  if (encoding.candidates >= 2 && combos > kPlainSearchLimit) {
    return MitmSearch(group, tally, ballots_counted, encoding).Run();
  }
  return SumSearch(group, tally, ballots_counted, encoding).Run();
}

ElectionResult Aggregate(const std::vector<BoothOutcome>& outcomes, uint32_t candidates) {
  ElectionResult result;
  result.totals.assign(candidates, 0);
  for (const BoothOutcome& outcome : outcomes) {
    if (outcome.status == BoothStatus::kClosed) {
      if (!outcome.tally.has_value() || outcome.tally->counts.size() != candidates) {
        throw Error("closed booth without a usable tally");
      }
      for (uint32_t j = 0; j < candidates; ++j) result.totals[j] += outcome.tally->counts[j];
      result.counted_booths.push_back(outcome.booth_id);
    } else {
      result.aborted_booths.push_back(outcome.booth_id);
    }
  }
  result.partial = !result.aborted_booths.empty();
  return result;
}

}  // namespace sbl
