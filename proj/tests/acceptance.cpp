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

// Acceptance gate for the sblvote stack.  Every criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "group.hpp"
#include "hashing.hpp"
#include "ledger.hpp"
#include "protocol.hpp"
#include "rng.hpp"
#include "sigma.hpp"
#include "sim.hpp"
#include "transcript.hpp"

namespace sbl {
namespace {

using SteadyClock = std::chrono::steady_clock;

double SecondsSince(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

std::string Fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

// 64-bit test group shared by the proof-system criteria; the toy group's
// 11-element scalar field makes random tampering collide with real
// challenges too often for statistical rejection tests.
const Group& WideGroup() {
  static const Group group = [] {
    DeterministicRng rng = DeterministicRng::FromSeed(777);
    return Group::Generate(64, rng.Take(32), SecurityLabel::kTest);
  }();
  return group;
}

bool AllBoothsClosed(const RunResult& result) {
  for (const auto& booth : result.booths) {
    if (booth.status != "closed") return false;
  }
  return !result.booths.empty();
}

bool ImportAndAuditValid(const Bytes& transcript) {
  ImportOutcome imported = ImportTranscript(transcript);
  if (!imported.ok()) return false;
  return AuditTranscript(*imported.transcript).valid;
}

// ---------------------------------------------------------------------------
// Criterion 1: randomized full-participation elections decode to the plain
// counts chosen up front by this harness.
// ---------------------------------------------------------------------------

CriterionResult Criterion1() {
  const SteadyClock::time_point start = SteadyClock::now();
  const uint64_t kRuns = 1000;
  uint64_t mismatches = 0;
  uint64_t audits = 0;
  std::string first_bad;
  DeterministicRng shape = DeterministicRng::FromSeed(0xC1);
  for (uint64_t i = 0; i < kRuns; ++i) {
    const uint32_t candidates = 1 + static_cast<uint32_t>(shape.UniformU64(5));
    const uint32_t booths = 1 + static_cast<uint32_t>(shape.UniformU64(4));
    const uint32_t voters = booths + static_cast<uint32_t>(shape.UniformU64(65 - booths));
    ScenarioConfig config = DefaultConfig(voters, candidates, booths, 41000 + i);
    config.signin_rate = 1.0;
    config.abstain_rate = 0.0;
    config.fixed_votes.resize(voters);
    std::vector<uint64_t> expected(candidates, 0);
    for (uint32_t v = 0; v < voters; ++v) {
      const uint32_t choice = 1 + static_cast<uint32_t>(shape.UniformU64(candidates));
      config.fixed_votes[v] = choice;
      ++expected[choice - 1];
    }
    RunOutput out = RunScenario(config);
    bool ok = !out.result.partial && out.result.totals == expected &&
              AllBoothsClosed(out.result) && out.result.totals_match;
    if (ok && i % 20 == 0) {
      ok = ImportAndAuditValid(out.transcript);
      if (ok) ++audits;
    }
    if (!ok) {
      ++mismatches;
      if (first_bad.empty()) first_bad = "; first bad seed " + std::to_string(41000 + i);
    }
  }
  const double secs = SecondsSince(start);
  std::ostringstream os;
  os << kRuns << " elections (n<=64, k<=5, G<=4, full participation), " << mismatches
     << " mismatches, " << audits << " spot audits valid, " << Fixed1(secs) << "s (budget 60s)"
     << first_bad;
  return {mismatches == 0 && secs < 60.0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 2: elections with abstainers complete through recovery and match
// the plain counts of the voters who actually voted.
// ---------------------------------------------------------------------------

CriterionResult Criterion2() {
  const SteadyClock::time_point start = SteadyClock::now();
  const uint64_t kRuns = 200;
  uint64_t mismatches = 0;
  uint64_t recovered_booths = 0;
  uint64_t audits = 0;
  bool worst_case_ok = false;
  std::string first_bad;
  DeterministicRng shape = DeterministicRng::FromSeed(0xC2);
  for (uint64_t i = 0; i < kRuns; ++i) {
    uint32_t candidates;
    uint32_t booths;
    uint32_t voters;
    std::set<uint32_t> abstainers;
    if (i == 0) {
      // Worst case: one booth, every voter but one abstains.
      candidates = 2;
      booths = 1;
      voters = 12;
      for (uint32_t v = 1; v <= voters; ++v) {
        if (v != 5) abstainers.insert(v);
      }
    } else {
      candidates = 1 + static_cast<uint32_t>(shape.UniformU64(5));
      booths = 1 + static_cast<uint32_t>(shape.UniformU64(4));
      const uint32_t low = std::max<uint32_t>(2, booths);
      voters = low + static_cast<uint32_t>(shape.UniformU64(41 - low));
      // Abstain up to half of each booth, always leaving one voting voter.
      const double rate = static_cast<double>(1 + shape.UniformU64(50)) / 100.0;
      std::vector<std::vector<uint32_t>> members(booths);
      for (uint32_t v = 1; v <= voters; ++v) members[(v - 1) % booths].push_back(v);
      for (auto& booth_members : members) {
        uint32_t want = static_cast<uint32_t>(rate * static_cast<double>(booth_members.size()));
        want = std::min<uint32_t>(want, static_cast<uint32_t>(booth_members.size()) - 1);
        for (uint32_t pick = 0; pick < want; ++pick) {
          const size_t j = pick + static_cast<size_t>(shape.UniformU64(booth_members.size() - pick));
          std::swap(booth_members[pick], booth_members[j]);
          abstainers.insert(booth_members[pick]);
        }
      }
    }
    ScenarioConfig config = DefaultConfig(voters, candidates, booths, 42000 + i);
    config.signin_rate = 1.0;
    config.abstain_rate = 0.0;
    config.forced_abstainers.assign(abstainers.begin(), abstainers.end());
    config.fixed_votes.resize(voters);
    std::vector<uint64_t> expected(candidates, 0);
    for (uint32_t v = 1; v <= voters; ++v) {
      const uint32_t choice = 1 + static_cast<uint32_t>(shape.UniformU64(candidates));
      config.fixed_votes[v - 1] = choice;
      if (!abstainers.contains(v)) ++expected[choice - 1];
    }
    RunOutput out = RunScenario(config);
    bool ok = !out.result.partial && out.result.totals == expected && AllBoothsClosed(out.result);
    uint64_t recoveries = 0;
    for (const auto& booth : out.result.booths) {
      if (booth.signins > booth.ballots) ++recoveries;
    }
    recovered_booths += recoveries;
    if (!abstainers.empty() && recoveries == 0) ok = false;
    if (i == 0) {
      worst_case_ok = ok && out.result.booths.size() == 1 &&
                      out.result.booths[0].signins == 12 && out.result.booths[0].ballots == 1;
    }
    if (ok && i % 4 == 0) {
      ok = ImportAndAuditValid(out.transcript);
      if (ok) ++audits;
    }
    if (!ok) {
      ++mismatches;
      if (first_bad.empty()) first_bad = "; first bad seed " + std::to_string(42000 + i);
    }
  }
  const double secs = SecondsSince(start);
  std::ostringstream os;
  os << kRuns << " elections with abstentions, " << mismatches << " mismatches, "
     << recovered_booths << " booths recovered, worst case |absent|=n-1 "
     << (worst_case_ok ? "ok" : "FAILED") << ", " << audits << " spot audits valid, "
     << Fixed1(secs) << "s" << first_bad;
  return {mismatches == 0 && worst_case_ok, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 3: the hand-derived toy-group chain reproduces exactly.
// ---------------------------------------------------------------------------

CriterionResult Criterion3() {
  const Group group = Group::TestGroup();
  DeterministicRng rng = DeterministicRng::FromSeed(0xC3);
  auto ctx = [](const std::string& address, std::string_view tag) {
    return ProofContext{"worked", 1, address, std::string(tag)};
  };
  const std::vector<uint64_t> secrets = {3, 5, 7};
  const std::vector<std::string> names = {"A", "B", "C"};
  std::vector<VoterKeyMaterial> material;
  BoothRoster roster;
  for (size_t i = 0; i < secrets.size(); ++i) {
    material.push_back(KeyMaterialFromSecret(group, ctx(names[i], kPhaseTagSignIn),
                                             group.ScalarFromUint(secrets[i]), rng));
    roster.Add(names[i], material.back().public_key);
  }
  std::ostringstream os;
  auto fail = [&os](const std::string& what) {
    os << "worked chain diverged at " << what;
    return CriterionResult{false, os.str()};
  };

  const std::vector<uint64_t> expect_x = {8, 9, 13};
  for (size_t i = 0; i < 3; ++i) {
    if (roster.entry(i + 1).public_key.value != expect_x[i]) return fail("roster X");
  }
  const std::vector<GroupElement> mpc = DeriveMpcKeys(group, roster);
  const std::vector<uint64_t> expect_y = {12, 13, 3};
  for (size_t i = 0; i < 3; ++i) {
    if (mpc[i].value != expect_y[i]) return fail("blinding key Y");
  }

  const VoteEncoding encoding = MakeEncoding(3, 2, group.tally_capacity_bits());
  const std::vector<uint32_t> votes = {1, 2, 1};
  std::vector<Ballot> ballots;
  for (size_t i = 0; i < 3; ++i) {
    ballots.push_back(CastBallot(group, ctx(names[i], kPhaseTagVote), material[i], mpc[i],
                                 votes[i], encoding, rng));
    if (!VerifyVote(group, ctx(names[i], kPhaseTagVote), material[i].public_key, mpc[i],
                    ballots[i].blinded, ballots[i].proof, encoding.AllExponents(group))
             .ok) {
      return fail("ballot proof");
    }
  }
  const GroupElement tally_full = TallyProduct(group, ballots, {});
  if (tally_full.value != 18) return fail("full tally T");
  auto counts_full = DecodeTally(group, tally_full, 3, encoding);
  if (!counts_full.has_value() || *counts_full != std::vector<uint64_t>{2, 1}) {
    return fail("full decode");
  }

  // Recovery branch: voter 3 never votes; voters 1 and 2 publish shares.
  const std::set<uint32_t> absent = {3};
  std::vector<Ballot> present(ballots.begin(), ballots.begin() + 2);
  std::vector<RecoveryShare> shares;
  const std::vector<uint64_t> expect_share = {2, 6};
  for (uint32_t i = 1; i <= 2; ++i) {
    shares.push_back(MakeRecoveryShare(group, ctx(names[i - 1], kPhaseTagRecovery),
                                       material[i - 1], roster, absent, i, rng));
    if (shares.back().share.value != expect_share[i - 1]) return fail("recovery share R");
    if (!VerifyRecoveryShare(group, ctx(names[i - 1], kPhaseTagRecovery), roster, absent, i,
                             material[i - 1].public_key, shares.back())
             .ok) {
      return fail("recovery share proof");
    }
  }
  const GroupElement tally_recovered = TallyProduct(group, present, shares);
  if (tally_recovered.value != 9) return fail("recovered tally T");
  auto counts_rec = DecodeTally(group, tally_recovered, 2, encoding);
  if (!counts_rec.has_value() || *counts_rec != std::vector<uint64_t>{1, 1}) {
    return fail("recovered decode");
  }

  os << "X=[8,9,13] Y=[12,13,3]; votes (1,2,1) -> T=18 counts (2,1); "
        "recovery without voter 3 -> T=9 counts (1,1)";
  return {true, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 4: proof-system completeness, soundness under single-field
// tampering, and special-soundness extraction with injected challenges.
// ---------------------------------------------------------------------------

CriterionResult Criterion4() {
  const Group& group = WideGroup();
  DeterministicRng rng = DeterministicRng::FromSeed(0xC4);
  const ProofContext base_ctx{"acceptance", 1, "prover", "signin"};
  std::map<uint32_t, std::vector<Scalar>> exponent_cache;
  auto exponents = [&](uint32_t candidates) -> const std::vector<Scalar>& {
    auto it = exponent_cache.find(candidates);
    if (it == exponent_cache.end()) {
      it = exponent_cache
               .emplace(candidates,
                        MakeEncoding(12, candidates, group.tally_capacity_bits())
                            .AllExponents(group))
               .first;
    }
    return it->second;
  };

  // Completeness: 1000 honest proofs of each system.
  uint64_t honest_failures = 0;
  for (uint64_t i = 0; i < 1000; ++i) {
    ProofContext ctx = base_ctx;
    ctx.voter_address = "voter-" + std::to_string(i);
    const Scalar x = group.RandomScalar(rng);
    auto [pub, schnorr] = ProveSchnorr(group, ctx, x, rng);
    if (!VerifySchnorr(group, ctx, pub, schnorr).ok) ++honest_failures;

    const GroupElement base_h = group.ExpPublic(group.generator(), group.RandomScalar(rng));
    auto [statement, dleq] = ProveDleq(group, ctx, x, base_h, rng);
    if (!VerifyDleq(group, ctx, base_h, statement, dleq).ok) ++honest_failures;

    const uint32_t candidates = 2 + static_cast<uint32_t>(i % 4);
    const GroupElement mpc = group.ExpPublic(group.generator(), group.RandomScalar(rng));
    const uint32_t choice = 1 + static_cast<uint32_t>(rng.UniformU64(candidates));
    auto [blinded, vote] = ProveVote(group, ctx, x, mpc, choice, exponents(candidates), rng);
    if (!VerifyVote(group, ctx, pub, mpc, blinded, vote, exponents(candidates)).ok) {
      ++honest_failures;
    }
  }

  // Soundness: 1000 proofs, each with exactly one field perturbed.
  uint64_t tamper_accepts = 0;
  const Scalar one = group.ScalarFromUint(1);
  for (uint64_t i = 0; i < 1000; ++i) {
    ProofContext ctx = base_ctx;
    ctx.voter_address = "tamper-" + std::to_string(i);
    const Scalar x = group.RandomScalar(rng);
    const int variant = static_cast<int>(i % 19);
    bool accepted = false;
    if (variant < 4) {
      auto [pub, proof] = ProveSchnorr(group, ctx, x, rng);
      ProofContext vctx = ctx;
      switch (variant) {
        case 0: pub = group.Mul(pub, group.generator()); break;
        case 1: proof.commitment = group.Mul(proof.commitment, group.generator()); break;
        case 2: proof.response = group.ScalarAdd(proof.response, one); break;
        case 3: vctx.election_id = "acceptance-2"; break;
      }
      accepted = VerifySchnorr(group, vctx, pub, proof).ok;
    } else if (variant < 10) {
      GroupElement base_h = group.ExpPublic(group.generator(), group.RandomScalar(rng));
      auto [statement, proof] = ProveDleq(group, ctx, x, base_h, rng);
      switch (variant) {
        case 4: statement.public_g = group.Mul(statement.public_g, group.generator()); break;
        case 5: statement.public_h = group.Mul(statement.public_h, group.generator()); break;
        case 6: proof.commitment_g = group.Mul(proof.commitment_g, group.generator()); break;
        case 7: proof.commitment_h = group.Mul(proof.commitment_h, group.generator()); break;
        case 8: proof.response = group.ScalarAdd(proof.response, one); break;
        case 9: base_h = group.Mul(base_h, group.generator()); break;
      }
      accepted = VerifyDleq(group, ctx, base_h, statement, proof).ok;
    } else {
      const uint32_t candidates = 2 + static_cast<uint32_t>(i % 4);
      GroupElement pub = group.ExpPublic(group.generator(), x);
      GroupElement mpc = group.ExpPublic(group.generator(), group.RandomScalar(rng));
      const uint32_t choice = 1 + static_cast<uint32_t>(rng.UniformU64(candidates));
      auto [blinded, vote] = ProveVote(group, ctx, x, mpc, choice, exponents(candidates), rng);
      const size_t branch = static_cast<size_t>(rng.UniformU64(vote.branches.size()));
      ProofContext vctx = ctx;
      switch (variant) {
        case 10: blinded = group.Mul(blinded, group.generator()); break;
        case 11: vote.branches[branch].challenge =
                     group.ScalarAdd(vote.branches[branch].challenge, one);
          break;
        case 12: vote.branches[branch].response =
                     group.ScalarAdd(vote.branches[branch].response, one);
          break;
        case 13: vote.branches[branch].commitment_g =
                     group.Mul(vote.branches[branch].commitment_g, group.generator());
          break;
        case 14: vote.branches[branch].commitment_y =
                     group.Mul(vote.branches[branch].commitment_y, group.generator());
          break;
        case 15: vote.branches.pop_back(); break;
        case 16: pub = group.Mul(pub, group.generator()); break;
        case 17: mpc = group.Mul(mpc, group.generator()); break;
        case 18: vctx.phase_tag = "recovery"; break;
      }
      accepted = VerifyVote(group, vctx, pub, mpc, blinded, vote, exponents(candidates)).ok;
    }
    if (accepted) ++tamper_accepts;
  }

  // Special soundness: two accepting transcripts on the same nonce with
  // distinct injected challenges must surrender the witness.
  uint64_t extraction_failures = 0;
  for (uint64_t i = 0; i < 50; ++i) {
    ProofContext ctx = base_ctx;
    ctx.voter_address = "extract-" + std::to_string(i);
    const Scalar x = group.RandomScalar(rng);
    const Scalar w = group.RandomScalar(rng);
    Scalar c1 = group.RandomScalar(rng);
    Scalar c2 = group.RandomScalar(rng);
    while (c2 == c1) c2 = group.RandomScalar(rng);
    const Scalar dc_inv = *group.ScalarInverse(group.ScalarSub(c1, c2));

    GroupElement pub;
    Scalar c_echo;
    const SchnorrProof s1 = testing::SchnorrWithNonce(group, ctx, x, w, c1, &pub, &c_echo);
    const SchnorrProof s2 = testing::SchnorrWithNonce(group, ctx, x, w, c2, &pub, &c_echo);
    bool ok = group.ExpPublic(group.generator(), s1.response) ==
                  group.Mul(s1.commitment, group.ExpPublic(pub, c1)) &&
              group.ExpPublic(group.generator(), s2.response) ==
                  group.Mul(s2.commitment, group.ExpPublic(pub, c2)) &&
              s1.commitment == s2.commitment;
    const Scalar extracted =
        group.ScalarMul(group.ScalarSub(s1.response, s2.response), dc_inv);
    ok = ok && extracted == x;

    GroupElement base_h = group.ExpPublic(group.generator(), group.RandomScalar(rng));
    DleqStatement st1;
    DleqStatement st2;
    const DleqProof d1 = testing::DleqWithNonce(group, ctx, x, base_h, w, c1, &st1, &c_echo);
    const DleqProof d2 = testing::DleqWithNonce(group, ctx, x, base_h, w, c2, &st2, &c_echo);
    ok = ok &&
         group.ExpPublic(group.generator(), d1.response) ==
             group.Mul(d1.commitment_g, group.ExpPublic(st1.public_g, c1)) &&
         group.ExpPublic(base_h, d1.response) ==
             group.Mul(d1.commitment_h, group.ExpPublic(st1.public_h, c1)) &&
         group.ExpPublic(group.generator(), d2.response) ==
             group.Mul(d2.commitment_g, group.ExpPublic(st2.public_g, c2));
    const Scalar dleq_extracted =
        group.ScalarMul(group.ScalarSub(d1.response, d2.response), dc_inv);
    ok = ok && dleq_extracted == x;

    // Vote relation: the real branch of the disjunction is exactly the
    // two-base relation on (g, Y), so challenge injection there recovers
    // the ballot secret.
    const GroupElement mpc = group.ExpPublic(group.generator(), group.RandomScalar(rng));
    DleqStatement vb1;
    DleqStatement vb2;
    const DleqProof v1 = testing::DleqWithNonce(group, ctx, x, mpc, w, c1, &vb1, &c_echo);
    const DleqProof v2 = testing::DleqWithNonce(group, ctx, x, mpc, w, c2, &vb2, &c_echo);
    const Scalar vote_extracted =
        group.ScalarMul(group.ScalarSub(v1.response, v2.response), dc_inv);
    const std::vector<Scalar>& exps = exponents(2);
    const GroupElement blinded = group.Mul(vb1.public_h, group.ExpPublic(group.generator(), exps[0]));
    ok = ok && vote_extracted == x &&
         blinded == group.Mul(group.Exp(mpc, vote_extracted),
                              group.ExpPublic(group.generator(), exps[0]));
    if (!ok) ++extraction_failures;
  }

  std::ostringstream os;
  os << "3x1000 honest proofs (" << honest_failures << " failures), 1000 single-field tamperings ("
     << tamper_accepts << " accepted), 150 challenge-injection extractions ("
     << extraction_failures << " failures)";
  return {honest_failures == 0 && tamper_accepts == 0 && extraction_failures == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 5: randomized ledger-operation fuzzing.  Invariants: rejected
// operations never mutate serialized state, phases never move backward, and
// accepted state never holds an artifact that fails independent
// re-verification.
// ---------------------------------------------------------------------------

int PhaseRank(Phase phase) { return static_cast<int>(phase); }

struct FuzzEpisode {
  std::shared_ptr<const Group> group;
  Election election;
  DeterministicRng rng;
  uint64_t clock = 0;
  std::map<std::string, VoterKeyMaterial> keys;
  std::map<std::string, std::pair<GroupElement, SchnorrProof>> accepted_signins;
  std::vector<std::string> eligible = {"alice", "bob", "carol", "dave"};
  bool reported = false;

  FuzzEpisode(std::shared_ptr<const Group> g, uint64_t index)
      : group(std::move(g)),
        election(MakeElection(group, "fuzz-" + std::to_string(index), "authority",
                              {"yes", "no"}, 1, PhaseWindows{4, 4})),
        rng(DeterministicRng::FromSeed(0xC50000 + index)) {}

  BoothContract& booth() { return election.booth(1); }

  const VoterKeyMaterial& MaterialFor(const std::string& name) {
    auto it = keys.find(name);
    if (it == keys.end()) {
      it = keys.emplace(name, Keygen(*group, booth().ContextFor(name, kPhaseTagSignIn), rng))
               .first;
    }
    return it->second;
  }

  std::string RandomName() { return eligible[rng.UniformU64(eligible.size())]; }

  Ballot JunkBallot(const std::string& address) {
    Ballot b;
    b.address = address;
    b.blinded = group->identity();
    return b;
  }

  std::optional<Ballot> HonestBallot(const std::string& name) {
    BoothContract& bc = booth();
    if (!bc.mpc_keys().has_value() || !bc.encoding().has_value()) return std::nullopt;
    auto index = bc.roster().IndexOf(name);
    if (!index.has_value()) return std::nullopt;
    const uint32_t choice = 1 + static_cast<uint32_t>(rng.UniformU64(2));
    return CastBallot(*group, bc.ContextFor(name, kPhaseTagVote), MaterialFor(name),
                      (*bc.mpc_keys())[*index - 1], choice, *bc.encoding(), rng);
  }

  std::optional<RecoveryShare> HonestShare(const std::string& name) {
    BoothContract& bc = booth();
    if (bc.absent().empty()) return std::nullopt;
    auto index = bc.roster().IndexOf(name);
    if (!index.has_value() || bc.absent().contains(static_cast<uint32_t>(*index))) {
      return std::nullopt;
    }
    return MakeRecoveryShare(*group, bc.ContextFor(name, kPhaseTagRecovery), MaterialFor(name),
                             bc.roster(), bc.absent(), static_cast<uint32_t>(*index), rng);
  }

  std::optional<BoothTally> HonestClaim() {
    BoothContract& bc = booth();
    if (!bc.encoding().has_value() || bc.ballots().empty()) return std::nullopt;
    const GroupElement tally = TallyProduct(*group, bc.ballots(), bc.shares());
    auto counts = DecodeTally(*group, tally, bc.ballots().size(), *bc.encoding());
    if (!counts.has_value()) return std::nullopt;
    BoothTally claim;
    claim.booth_id = 1;
    claim.ballots_counted = bc.ballots().size();
    claim.counts = *counts;
    claim.packed = bc.encoding()->Pack(*counts);
    claim.tally = tally;
    return claim;
  }

  BoothTally LyingClaim() {
    BoothTally claim;
    claim.booth_id = 1;
    claim.ballots_counted = booth().ballots().size();
    claim.counts = {claim.ballots_counted + 1, 0};
    claim.packed = 1;
    claim.tally = group->generator();
    return claim;
  }

  // Issues exactly one ledger operation and returns its result.
  ApplyResult Step() {
    BoothContract& bc = booth();
    const Group& g = *group;
    switch (rng.UniformU64(17)) {
      case 0: {  // Honest next-phase advance.
        Phase target = Phase::kRegistration;
        switch (bc.phase()) {
          case Phase::kSetup: target = Phase::kRegistration; break;
          case Phase::kRegistration: target = Phase::kSignIn; break;
          case Phase::kSignIn: target = Phase::kPreVoting; break;
          case Phase::kPreVoting: target = Phase::kVoting; break;
          default: target = static_cast<Phase>(rng.UniformU64(9)); break;
        }
        return bc.AdvancePhase("authority", clock, target);
      }
      case 1:  // Rogue advance: random target, sometimes wrong caller.
        return bc.AdvancePhase(rng.Chance(0.5) ? "authority" : "mallory", clock,
                               static_cast<Phase>(rng.UniformU64(9)));
      case 2:  // Registration, honest or garbage.
        switch (rng.UniformU64(4)) {
          case 0: return bc.RegisterVoters("authority", clock, eligible);
          case 1: return bc.RegisterVoters("mallory", clock, eligible);
          case 2: return bc.RegisterVoters("authority", clock, {});
          default: return bc.RegisterVoters("authority", clock, {"alice", "alice"});
        }
      case 3: {  // Honest sign-in.
        const std::string name = RandomName();
        const VoterKeyMaterial& m = MaterialFor(name);
        ApplyResult r = bc.SignIn(name, clock, m.public_key, m.signin_proof);
        if (r.ok()) accepted_signins[name] = {m.public_key, m.signin_proof};
        return r;
      }
      case 4: {  // Hostile sign-in.
        const std::string name = RandomName();
        const VoterKeyMaterial& m = MaterialFor(name);
        switch (rng.UniformU64(3)) {
          case 0: {  // Proof replayed by the wrong sender.
            ApplyResult r = bc.SignIn("mallory", clock, m.public_key, m.signin_proof);
            return r;
          }
          case 1: {  // Tampered response.
            SchnorrProof broken = m.signin_proof;
            broken.response = g.ScalarAdd(broken.response, g.ScalarFromUint(1));
            ApplyResult r = bc.SignIn(name, clock, m.public_key, broken);
            if (r.ok()) accepted_signins[name] = {m.public_key, broken};
            return r;
          }
          default: {  // Ineligible address with a valid proof shape.
            ProofContext ctx = bc.ContextFor("mallory", kPhaseTagSignIn);
            VoterKeyMaterial spare = Keygen(g, ctx, rng);
            return bc.SignIn("mallory", clock, spare.public_key, spare.signin_proof);
          }
        }
      }
      case 5: {  // Honest blinding-key publication.
        const VoteEncoding enc = MakeEncoding(
            std::max<uint32_t>(1, static_cast<uint32_t>(bc.roster().size())), 2,
            g.tally_capacity_bits());
        return bc.PublishMpc("authority", clock, DeriveMpcKeys(g, bc.roster()), enc);
      }
      case 6: {  // Hostile blinding-key publication.
        const VoteEncoding enc = MakeEncoding(
            std::max<uint32_t>(1, static_cast<uint32_t>(bc.roster().size())), 2,
            g.tally_capacity_bits());
        std::vector<GroupElement> derived = DeriveMpcKeys(g, bc.roster());
        switch (rng.UniformU64(3)) {
          case 0:
            if (!derived.empty()) derived[0] = g.Mul(derived[0], g.generator());
            return bc.PublishMpc("authority", clock, derived, enc);
          case 1:
            if (!derived.empty()) derived.pop_back();
            return bc.PublishMpc("authority", clock, derived, enc);
          default: return bc.PublishMpc("mallory", clock, derived, enc);
        }
      }
      case 7: {  // Honest ballot.
        const std::string name = RandomName();
        auto ballot = HonestBallot(name);
        if (!ballot.has_value()) return bc.SubmitBallot(name, clock, JunkBallot(name));
        return bc.SubmitBallot(name, clock, *ballot);
      }
      case 8: {  // Hostile ballot.
        const std::string name = RandomName();
        auto ballot = HonestBallot(name);
        if (!ballot.has_value()) return bc.SubmitBallot("mallory", clock, JunkBallot("mallory"));
        switch (rng.UniformU64(3)) {
          case 0: return bc.SubmitBallot("mallory", clock, *ballot);  // Sender mismatch.
          case 1: {
            ballot->blinded = g.Mul(ballot->blinded, g.generator());
            return bc.SubmitBallot(name, clock, *ballot);
          }
          default: {  // Double vote when possible, otherwise first vote.
            return bc.SubmitBallot(name, clock, *ballot);
          }
        }
      }
      case 9:  // Close voting; jump the clock to the deadline half the time.
        if (bc.phase() == Phase::kVoting && clock < bc.voting_deadline() && rng.Chance(0.5)) {
          clock = bc.voting_deadline();
        }
        return bc.CloseVoting(rng.Chance(0.8) ? "authority" : "mallory", clock);
      case 10: {  // Honest recovery share.
        const std::string name = RandomName();
        auto share = HonestShare(name);
        if (!share.has_value()) {
          RecoveryShare junk;
          junk.address = name;
          junk.share = g.identity();
          junk.absent_hash = AbsentSetHash(bc.absent());
          return bc.SubmitRecovery(name, clock, junk);
        }
        return bc.SubmitRecovery(name, clock, *share);
      }
      case 11: {  // Hostile recovery share.
        const std::string name = RandomName();
        auto share = HonestShare(name);
        if (!share.has_value()) {
          RecoveryShare junk;
          junk.address = "mallory";
          junk.share = g.generator();
          junk.absent_hash = AbsentSetHash({});
          return bc.SubmitRecovery("mallory", clock, junk);
        }
        switch (rng.UniformU64(3)) {
          case 0: share->share = g.Mul(share->share, g.generator()); break;
          case 1: share->absent_hash = AbsentSetHash({99}); break;
          default: return bc.SubmitRecovery("mallory", clock, *share);  // Sender mismatch.
        }
        return bc.SubmitRecovery(name, clock, *share);
      }
      case 12: {  // Honest finalize; jump to the recovery deadline half the time.
        if (bc.phase() == Phase::kRecovery && clock < bc.recovery_deadline() && rng.Chance(0.5)) {
          clock = bc.recovery_deadline();
        }
        auto claim = HonestClaim();
        return bc.Finalize("authority", clock, claim.has_value() ? *claim : LyingClaim());
      }
      case 13:  // Lying finalize.
        return bc.Finalize(rng.Chance(0.8) ? "authority" : "mallory", clock, LyingClaim());
      case 14:  // Abort, rarely authorized.
        if (rng.UniformU64(12) == 0) return bc.Abort("authority", clock, "fuzz-stop");
        return bc.Abort("mallory", clock, "fuzz-stop");
      case 15: {  // Honest result report.
        const bool closed = bc.phase() == Phase::kClosed;
        ApplyResult r = election.main->AcceptResult(
            "authority", clock, 1, closed ? "closed" : "aborted",
            closed ? bc.finalized() : std::nullopt, bc);
        if (r.ok()) reported = true;
        return r;
      }
      default:  // Hostile result report.
        switch (rng.UniformU64(3)) {
          case 0: return election.main->AcceptResult("authority", clock, 7, "closed",
                                                     std::nullopt, booth());
          case 1: return election.main->AcceptResult("authority", clock, 1, "aborted",
                                                     std::nullopt, booth());
          default: return election.main->AcceptResult("mallory", clock, 1, "closed",
                                                      booth().finalized(), booth());
        }
    }
  }

  // Every artifact reachable from accepted state must re-verify from scratch.
  std::string ReverifyArtifacts() {
    BoothContract& bc = booth();
    const Group& g = *group;
    if (bc.roster().size() != accepted_signins.size()) return "roster size drifted";
    for (size_t i = 1; i <= bc.roster().size(); ++i) {
      const RosterEntry& entry = bc.roster().entry(i);
      auto it = accepted_signins.find(entry.address);
      if (it == accepted_signins.end()) return "roster holds unknown address";
      if (!(it->second.first == entry.public_key)) return "roster key drifted";
      if (!VerifySchnorr(g, bc.ContextFor(entry.address, kPhaseTagSignIn), entry.public_key,
                         it->second.second)
               .ok) {
        return "roster holds unverified sign-in";
      }
    }
    if (bc.mpc_keys().has_value()) {
      const std::vector<GroupElement> derived = DeriveMpcKeys(g, bc.roster());
      if (derived.size() != bc.mpc_keys()->size()) return "blinding key count drifted";
      for (size_t i = 0; i < derived.size(); ++i) {
        if (!(derived[i] == (*bc.mpc_keys())[i])) return "blinding key drifted";
      }
    }
    std::vector<Scalar> exps;
    if (bc.encoding().has_value()) exps = bc.encoding()->AllExponents(g);
    for (const Ballot& ballot : bc.ballots()) {
      auto index = bc.roster().IndexOf(ballot.address);
      if (!index.has_value() || !bc.mpc_keys().has_value()) return "ballot without roster entry";
      if (!VerifyVote(g, bc.ContextFor(ballot.address, kPhaseTagVote),
                      bc.roster().entry(*index).public_key, (*bc.mpc_keys())[*index - 1],
                      ballot.blinded, ballot.proof, exps)
               .ok) {
        return "stored ballot fails verification";
      }
    }
    for (const RecoveryShare& share : bc.shares()) {
      auto index = bc.roster().IndexOf(share.address);
      if (!index.has_value()) return "share without roster entry";
      if (!VerifyRecoveryShare(g, bc.ContextFor(share.address, kPhaseTagRecovery), bc.roster(),
                               bc.absent(), static_cast<uint32_t>(*index),
                               bc.roster().entry(*index).public_key, share)
               .ok) {
        return "stored share fails verification";
      }
    }
    if (bc.finalized().has_value()) {
      const BoothTally& tally = *bc.finalized();
      if (!bc.encoding().has_value()) return "finalized without encoding";
      if (tally.ballots_counted != bc.ballots().size()) return "finalized ballot count drifted";
      if (tally.counts != bc.encoding()->Unpack(tally.packed)) return "finalized counts drifted";
      if (!(g.ExpPublic(g.generator(), tally.packed) == tally.tally)) {
        return "finalized tally does not open";
      }
      if (!(TallyProduct(g, bc.ballots(), bc.shares()) == tally.tally)) {
        return "finalized tally diverges from artifacts";
      }
    }
    return "";
  }
};

CriterionResult Criterion5() {
  const SteadyClock::time_point start = SteadyClock::now();
  auto group = std::make_shared<const Group>(Group::TestGroup());
  const uint64_t kTargetOps = 10000;
  uint64_t ops = 0;
  uint64_t accepted = 0;
  uint64_t rejected = 0;
  uint64_t episodes = 0;
  std::string violation;
  while (ops < kTargetOps && violation.empty()) {
    ++episodes;
    FuzzEpisode ep(group, episodes);
    int last_rank = PhaseRank(ep.booth().phase());
    for (int step = 0; step < 400 && violation.empty(); ++step) {
      if (PhaseIsTerminal(ep.booth().phase()) && ep.reported) break;
      const std::string before =
          ep.booth().SerializeState().dump() + "|" + ep.election.main->SerializeState().dump();
      ApplyResult result = ep.Step();
      ++ops;
      const std::string after =
          ep.booth().SerializeState().dump() + "|" + ep.election.main->SerializeState().dump();
      if (result.ok()) {
        ++accepted;
      } else {
        ++rejected;
        if (after != before) {
          violation = "rejected operation mutated state (" + result.message + ")";
          break;
        }
      }
      const int rank = PhaseRank(ep.booth().phase());
      if (rank < last_rank) {
        violation = "phase moved backward";
        break;
      }
      last_rank = rank;
      if (result.ok()) {
        violation = ep.ReverifyArtifacts();
        if (!violation.empty()) {
          violation += " (after " + (result.event.has_value() ? result.event->op : "op") + ")";
        }
      }
    }
  }
  const double secs = SecondsSince(start);
  std::ostringstream os;
  if (!violation.empty()) {
    os << "invariant violated after " << ops << " operations: " << violation;
    return {false, os.str()};
  }
  os << ops << " randomized operations across " << episodes << " elections (" << accepted
     << " accepted, " << rejected << " rejected), no unverified artifacts, no backward phase "
     << "moves, rejected ops left state untouched, " << Fixed1(secs) << "s";
  return {ops >= kTargetOps, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 6: attack catalog containment, honest-transcript validity, and
// single-bit tamper fuzzing.
// ---------------------------------------------------------------------------

CriterionResult Criterion6() {
  const SteadyClock::time_point start = SteadyClock::now();
  std::ostringstream os;

  // (a) Every cataloged attack is contained: rejected on-ledger, absorbed as
  // a booth abort, or flagged by the auditor.
  struct CatalogEntry {
    std::string type;
    std::string target;
    bool wide = false;
  };
  const std::vector<CatalogEntry> catalog = {
      {kAttackDoubleVote, "", false},
      {kAttackForgedBallot, "", false},
      {kAttackWrongPhase, "", false},
      {kAttackBadMpcKeys, "", false},
      {kAttackStallRecovery, "", false},
      {kAttackTamperTranscript, "ballot", true},
      {kAttackTamperTranscript, "result-counts", true},
      {kAttackTamperTranscript, "signin-order", true},
  };
  uint64_t contained = 0;
  std::string attack_note;
  for (size_t i = 0; i < catalog.size(); ++i) {
    const CatalogEntry& entry = catalog[i];
    ScenarioConfig config = DefaultConfig(8, 3, 2, 61000 + i);
    config.signin_rate = 1.0;
    config.abstain_rate = 0.0;
    if (entry.wide) config.group_bits = 64;
    if (entry.type == kAttackStallRecovery) config.forced_abstainers = {2};
    AttackSpec spec;
    spec.type = entry.type;
    spec.target = entry.target;
    config.attacks = {spec};
    RunOutput out = RunScenario(config);
    if (out.result.attacks.size() != 1) {
      attack_note = entry.type + ": no outcome recorded";
      continue;
    }
    const AttackOutcome& outcome = out.result.attacks[0];
    ImportOutcome imported = ImportTranscript(out.transcript);
    if (!imported.ok()) {
      attack_note = entry.type + ": transcript import failed";
      continue;
    }
    AuditReport report = AuditTranscript(*imported.transcript);
    bool ok = false;
    if (outcome.expectation == "ledger-reject") {
      ok = report.valid && out.result.totals_match && !out.result.partial;
    } else if (outcome.expectation == "booth-abort") {
      bool any_abort = false;
      for (const auto& booth : out.result.booths) {
        if (booth.status == "aborted" && booth.abort_reason == "missing-shares") any_abort = true;
      }
      ok = report.valid && out.result.partial && any_abort;
    } else if (outcome.expectation == "audit-fail") {
      ok = !report.valid && report.first_failure.has_value() &&
           report.first_failure->check == outcome.check;
    }
    if (ok) {
      ++contained;
    } else if (attack_note.empty()) {
      attack_note = entry.type + (entry.target.empty() ? "" : "/" + entry.target) +
                    ": expectation " + outcome.expectation + " not met";
    }
  }

  // (b) Honest transcripts across shapes always audit valid, including a
  // degenerate booth that aborts for lack of sign-ins.
  uint64_t honest_valid = 0;
  const uint64_t honest_total = 6;
  {
    std::vector<ScenarioConfig> honest;
    honest.push_back(DefaultConfig(5, 2, 1, 62001));
    honest.push_back(DefaultConfig(9, 3, 3, 62002));
    ScenarioConfig degenerate = DefaultConfig(4, 2, 2, 62003);
    degenerate.forced_non_signers = {2, 4};  // Booth 2 never opens: no sign-ins.
    honest.push_back(degenerate);
    ScenarioConfig recovery = DefaultConfig(10, 4, 2, 62004);
    recovery.forced_abstainers = {3, 8};
    honest.push_back(recovery);
    ScenarioConfig wide = DefaultConfig(6, 2, 2, 62005);
    wide.group_bits = 64;
    honest.push_back(wide);
    ScenarioConfig single = DefaultConfig(1, 1, 1, 62006);
    honest.push_back(single);
    for (const ScenarioConfig& config : honest) {
      if (ImportAndAuditValid(RunScenario(config).transcript)) ++honest_valid;
    }
  }

  // (c) Single-bit tamper fuzz over a wide-group transcript: every flip must
  // fail import or fail audit.
  ScenarioConfig fuzz_config = DefaultConfig(8, 3, 2, 63000);
  fuzz_config.group_bits = 64;
  fuzz_config.signin_rate = 1.0;
  fuzz_config.abstain_rate = 0.0;
  RunOutput fuzz_base = RunScenario(fuzz_config);
  uint64_t import_rejects = 0;
  uint64_t audit_rejects = 0;
  uint64_t false_valids = 0;
  std::string first_false;
  bool baseline_valid = ImportAndAuditValid(fuzz_base.transcript);
  DeterministicRng flipper = DeterministicRng::FromSeed(0xF11B);
  for (uint64_t trial = 0; trial < 1000; ++trial) {
    Bytes mutated = fuzz_base.transcript;
    const uint64_t bit = flipper.UniformU64(mutated.size() * 8);
    mutated[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    ImportOutcome imported = ImportTranscript(mutated);
    if (!imported.ok()) {
      ++import_rejects;
      continue;
    }
    AuditReport report = AuditTranscript(*imported.transcript);
    if (!report.valid) {
      ++audit_rejects;
    } else {
      ++false_valids;
      if (first_false.empty()) first_false = "; first false-valid at bit " + std::to_string(bit);
    }
  }

  const double secs = SecondsSince(start);
  const bool pass = contained == catalog.size() && honest_valid == honest_total &&
                    baseline_valid && false_valids == 0;
  os << contained << "/" << catalog.size() << " attacks contained"
     << (attack_note.empty() ? "" : " (" + attack_note + ")") << ", " << honest_valid << "/"
     << honest_total << " honest transcripts valid, 1000 bit flips: " << import_rejects
     << " import-rejected, " << audit_rejects << " audit-rejected, " << false_valids
     << " false-valid" << first_false << ", " << Fixed1(secs) << "s";
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 7: determinism of the simulator.
// ---------------------------------------------------------------------------

CriterionResult Criterion7() {
  ScenarioConfig config = DefaultConfig(9, 3, 3, 4321);
  config.forced_abstainers = {2};
  const Bytes first = RunScenario(config).transcript;
  const Bytes second = RunScenario(config).transcript;
  ScenarioConfig other_seed = config;
  other_seed.seed = 4322;
  const Bytes third = RunScenario(other_seed).transcript;

  ScenarioConfig wide = DefaultConfig(6, 2, 2, 4444);
  wide.group_bits = 64;
  const Bytes wide_first = RunScenario(wide).transcript;
  const Bytes wide_second = RunScenario(wide).transcript;

  const bool same = first == second && wide_first == wide_second;
  const bool differs = first != third;
  std::ostringstream os;
  os << "same config+seed -> byte-identical transcripts (" << first.size()
     << " and " << wide_first.size() << " bytes), different seed -> "
     << (differs ? "different bytes" : "IDENTICAL BYTES");
  return {same && differs, os.str()};
}

// ---------------------------------------------------------------------------
// Criterion 8: desk-scale performance at production group size.
// ---------------------------------------------------------------------------

CriterionResult Criterion8() {
  ScenarioConfig config = DefaultConfig(1000, 5, 10, 2026);
  config.group_bits = 2048;
  config.signin_rate = 1.0;
  config.abstain_rate = 0.0;
  const SteadyClock::time_point start = SteadyClock::now();
  RunOutput out = RunScenario(config);
  const double run_secs = SecondsSince(start);

  const bool outcome_ok =
      !out.result.partial && out.result.totals_match && AllBoothsClosed(out.result);
  uint64_t total_votes = 0;
  for (uint64_t c : out.result.totals) total_votes += c;

  const std::string bench = BenchCsv(config, out.result);
  const bool bench_ok = bench.find("signin_per_s,") != std::string::npos &&
                        bench.find("vote_per_s,") != std::string::npos &&
                        bench.find("tally_per_s,") != std::string::npos;

  const SteadyClock::time_point audit_start = SteadyClock::now();
  const bool audit_valid = ImportAndAuditValid(out.transcript);
  const double audit_secs = SecondsSince(audit_start);

  auto bench_value = [&bench](const std::string& key) {
    const size_t pos = bench.find(key + ",");
    if (pos == std::string::npos) return std::string("?");
    const size_t eol = bench.find('\n', pos);
    return bench.substr(pos + key.size() + 1, eol - pos - key.size() - 1);
  };

  std::ostringstream os;
  os << "n=1000 k=5 G=10 2048-bit run " << Fixed1(run_secs) << "s (budget 300s), "
     << total_votes << " votes counted, throughput signin=" << bench_value("signin_per_s")
     << "/s vote=" << bench_value("vote_per_s") << "/s tally=" << bench_value("tally_per_s")
     << "/s, audit " << Fixed1(audit_secs) << "s "
     << (audit_valid ? "valid" : "INVALID");
  return {run_secs < 300.0 && outcome_ok && bench_ok && total_votes == 1000 && audit_valid,
          os.str()};
}

}  // namespace
}  // namespace sbl

int main() {
  using sbl::CriterionResult;
  struct Entry {
    const char* id;
    const char* title;
    CriterionResult (*fn)();
  };
  const Entry entries[] = {
      {"C1", "self-tallying correctness", sbl::Criterion1},
      {"C2", "fault recovery", sbl::Criterion2},
      {"C3", "worked micro-vectors", sbl::Criterion3},
      {"C4", "proof completeness and soundness", sbl::Criterion4},
      {"C5", "ledger safety", sbl::Criterion5},
      {"C6", "audit soundness", sbl::Criterion6},
      {"C7", "determinism", sbl::Criterion7},
      {"C8", "desk-scale performance", sbl::Criterion8},
  };
  int failures = 0;
  for (const Entry& entry : entries) {
    CriterionResult result;
    try {
      result = entry.fn();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s (%s): %s\n", result.pass ? "PASS" : "FAIL", entry.id, entry.title,
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
