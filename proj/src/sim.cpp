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

#include "sim.hpp"

#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include "hashing.hpp"

namespace sbl {

namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string VoterAddress(uint32_t global_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "voter-%04u", global_id);
  return buf;
}

constexpr const char* kAuthority = "authority";

}  // namespace

unsigned ScenarioConfig::CapacityBits() const {
  // Mirrors Group::tally_capacity_bits without constructing the group.
  if (!group_bits.has_value()) return 11;
  return *group_bits - 1;
}

void ScenarioConfig::Validate() const {
  auto bad = [](const std::string& why) -> void { throw ConfigError(why); };
  if (election_id.empty()) bad("election_id is empty");
  if (candidates < 1 || candidates > 64) bad("candidates must be in [1, 64]");
  if (booths < 1 || booths > 4096) bad("booths must be in [1, 4096]");
  if (voters > 1000000) bad("too many voters");
  if (group_bits.has_value() && *group_bits < 16) bad("group_bits must be at least 16");
  if (signin_rate < 0.0 || signin_rate > 1.0) bad("signin_rate outside [0, 1]");
  if (abstain_rate < 0.0 || abstain_rate > 1.0) bad("abstain_rate outside [0, 1]");
  if (!fixed_votes.empty() && fixed_votes.size() != voters) {
    bad("fixed_votes must list every voter or be empty");
  }
  for (uint32_t v : fixed_votes) {
    if (v < 1 || v > candidates) bad("fixed vote out of candidate range");
  }
  for (uint32_t i : forced_abstainers) {
    if (i < 1 || i > voters) bad("forced abstainer out of range");
  }
  for (uint32_t i : forced_non_signers) {
    if (i < 1 || i > voters) bad("forced non-signer out of range");
  }
  if (windows.voting_ticks < 1 || windows.recovery_ticks < 1) bad("phase windows must be positive");
  for (const AttackSpec& a : attacks) {
    if (a.type != kAttackDoubleVote && a.type != kAttackForgedBallot &&
        a.type != kAttackWrongPhase && a.type != kAttackBadMpcKeys &&
        a.type != kAttackStallRecovery && a.type != kAttackTamperTranscript) {
      bad("unknown attack type " + a.type);
    }
    if (a.booth > booths) bad("attack booth out of range");
    if (a.voter > voters) bad("attack voter out of range");
    if (a.type == kAttackTamperTranscript && !a.target.empty() && a.target != "ballot" &&
        a.target != "result-counts" && a.target != "signin-order") {
      bad("unknown tamper target " + a.target);
    }
  }
  // Worst-case booth roster; throws CapacityError when the packing cannot fit.
  uint32_t max_roster = booths == 0 ? 0 : (voters + booths - 1) / booths;
  (void)MakeEncoding(max_roster, candidates, CapacityBits());
}

ScenarioConfig ScenarioConfig::FromJson(const Json& j) {
  if (!j.is_object()) throw ConfigError("config is not a JSON object");
  static const std::set<std::string> kKnownKeys = {
      "election_id", "voters",           "candidates",         "booths",
      "seed",        "group",            "signin_rate",        "abstain_rate",
      "forced_abstainers", "forced_non_signers", "fixed_votes", "windows",
      "attacks"};
  for (const auto& [key, value] : j.items()) {
    if (kKnownKeys.count(key) == 0) throw ConfigError("unknown config key " + key);
  }
  ScenarioConfig c;
  auto get_u32 = [&](const char* field, uint32_t fallback) -> uint32_t {
    if (!j.contains(field)) return fallback;
    if (!j[field].is_number_unsigned()) throw ConfigError(std::string(field) + " must be unsigned");
    return j[field].get<uint32_t>();
  };
  auto get_rate = [&](const char* field, double fallback) -> double {
    if (!j.contains(field)) return fallback;
    if (!j[field].is_number()) throw ConfigError(std::string(field) + " must be a number");
    return j[field].get<double>();
  };
  auto get_list = [&](const char* field) -> std::vector<uint32_t> {
    std::vector<uint32_t> out;
    if (!j.contains(field)) return out;
    if (!j[field].is_array()) throw ConfigError(std::string(field) + " must be an array");
    for (const Json& e : j[field]) {
      if (!e.is_number_unsigned()) throw ConfigError(std::string(field) + " entries must be unsigned");
      out.push_back(e.get<uint32_t>());
    }
    return out;
  };

  if (j.contains("election_id")) {
    if (!j["election_id"].is_string()) throw ConfigError("election_id must be a string");
    c.election_id = j["election_id"].get<std::string>();
  }
  c.voters = get_u32("voters", c.voters);
  c.candidates = get_u32("candidates", c.candidates);
  c.booths = get_u32("booths", c.booths);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be unsigned");
    c.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("group")) {
    const Json& g = j["group"];
    if (g.is_string()) {
      if (g.get<std::string>() != "test") throw ConfigError("unknown group name");
      c.group_bits = std::nullopt;
    } else if (g.is_object() && g.contains("bits") && g["bits"].is_number_unsigned()) {
      c.group_bits = g["bits"].get<unsigned>();
    } else {
      throw ConfigError("group must be \"test\" or {\"bits\": n}");
    }
  }
  c.signin_rate = get_rate("signin_rate", c.signin_rate);
  c.abstain_rate = get_rate("abstain_rate", c.abstain_rate);
  c.forced_abstainers = get_list("forced_abstainers");
  c.forced_non_signers = get_list("forced_non_signers");
  c.fixed_votes = get_list("fixed_votes");
  if (j.contains("windows")) {
    const Json& w = j["windows"];
    if (!w.is_object()) throw ConfigError("windows must be an object");
    for (const auto& [key, value] : w.items()) {
      if (key != "voting" && key != "recovery") throw ConfigError("unknown windows key " + key);
    }
    if (w.contains("voting")) {
      if (!w["voting"].is_number_unsigned()) throw ConfigError("windows.voting must be unsigned");
      c.windows.voting_ticks = w["voting"].get<uint64_t>();
    }
    if (w.contains("recovery")) {
      if (!w["recovery"].is_number_unsigned()) throw ConfigError("windows.recovery must be unsigned");
      c.windows.recovery_ticks = w["recovery"].get<uint64_t>();
    }
  }
  if (j.contains("attacks")) {
    if (!j["attacks"].is_array()) throw ConfigError("attacks must be an array");
    for (const Json& aj : j["attacks"]) {
      if (!aj.is_object() || !aj.contains("type") || !aj["type"].is_string()) {
        throw ConfigError("attack entries need a type");
      }
      for (const auto& [key, value] : aj.items()) {
        if (key != "type" && key != "booth" && key != "voter" && key != "target") {
          throw ConfigError("unknown attack key " + key);
        }
      }
      AttackSpec spec;
      spec.type = aj["type"].get<std::string>();
      if (aj.contains("booth")) {
        if (!aj["booth"].is_number_unsigned()) throw ConfigError("attack booth must be unsigned");
        spec.booth = aj["booth"].get<uint32_t>();
      }
      if (aj.contains("voter")) {
        if (!aj["voter"].is_number_unsigned()) throw ConfigError("attack voter must be unsigned");
        spec.voter = aj["voter"].get<uint32_t>();
      }
      if (aj.contains("target")) {
        if (!aj["target"].is_string()) throw ConfigError("attack target must be a string");
        spec.target = aj["target"].get<std::string>();
      }
      c.attacks.push_back(std::move(spec));
    }
  }
  c.Validate();
  return c;
}

ScenarioConfig ScenarioConfig::FromJsonText(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return FromJson(j);
}

Json ScenarioConfig::ToJson() const {
  Json j{{"election_id", election_id},
         {"voters", voters},
         {"candidates", candidates},
         {"booths", booths},
         {"seed", seed},
         {"signin_rate", signin_rate},
         {"abstain_rate", abstain_rate},
         {"windows",
          Json{{"voting", windows.voting_ticks}, {"recovery", windows.recovery_ticks}}}};
  if (group_bits.has_value()) {
    j["group"] = Json{{"bits", *group_bits}};
  } else {
    j["group"] = "test";
  }
  if (!forced_abstainers.empty()) j["forced_abstainers"] = forced_abstainers;
  if (!forced_non_signers.empty()) j["forced_non_signers"] = forced_non_signers;
  if (!fixed_votes.empty()) j["fixed_votes"] = fixed_votes;
  if (!attacks.empty()) {
    Json list = Json::array();
    for (const AttackSpec& a : attacks) {
      Json aj{{"type", a.type}};
      if (a.booth != 0) aj["booth"] = a.booth;
      if (a.voter != 0) aj["voter"] = a.voter;
      if (!a.target.empty()) aj["target"] = a.target;
      list.push_back(std::move(aj));
    }
    j["attacks"] = list;
  }
  return j;
}

namespace {

// The toy group's tally exponent lives mod 11, so decoding is unambiguous
// only when all count vectors with one ballot total pack to distinct
// residues.  Toy-eligible shapes keep this enumeration tiny.
bool ToyDecodesUniquely(uint32_t max_roster, uint32_t candidates) {
  uint32_t m = 1;
  while ((uint64_t{1} << m) < uint64_t{max_roster} + 1) ++m;
  std::set<std::pair<uint32_t, uint32_t>> seen;  // (ballot total, packed mod 11)
  std::vector<uint32_t> weights(candidates);
  uint64_t w = 1;
  for (uint32_t j = 0; j < candidates; ++j) {
    weights[j] = static_cast<uint32_t>(w % 11);
    for (uint32_t b = 0; b < m; ++b) w = (w * 2) % 11;
  }
  bool unique = true;
  std::vector<uint32_t> counts(candidates, 0);
  auto walk = [&](auto&& self, uint32_t level, uint32_t used, uint32_t residue) -> void {
    if (!unique) return;
    if (level == candidates) {
      if (!seen.insert({used, residue}).second) unique = false;
      return;
    }
    for (uint32_t c = 0; used + c <= max_roster; ++c) {
      self(self, level + 1, used + c, (residue + c * weights[level]) % 11);
    }
  };
  walk(walk, 0, 0, 0);
  return unique;
}

}  // namespace

ScenarioConfig DefaultConfig(uint32_t voters, uint32_t candidates, uint32_t booths, uint64_t seed) {
  ScenarioConfig c;
  c.election_id = "election-" + std::to_string(seed);
  c.voters = voters;
  c.candidates = candidates;
  c.booths = booths == 0 ? 1 : booths;
  c.seed = seed;
  // Pick the smallest comfortable group: the toy group when the packing
  // fits its advertised budget and decodes uniquely, otherwise a seeded
  // group with headroom.
  uint32_t max_roster = (voters + c.booths - 1) / c.booths;
  uint32_t m = 1;
  while ((uint64_t{1} << m) < uint64_t{max_roster} + 1) ++m;
  uint64_t needed = uint64_t{candidates} * m;
  if (needed < 11 && ToyDecodesUniquely(max_roster, candidates)) {
    c.group_bits = std::nullopt;
  } else {
    unsigned bits = static_cast<unsigned>(((needed + 10 + 7) / 8) * 8);
    c.group_bits = std::max(24u, bits);
  }
  return c;
}

namespace {

struct VoterPlan {
  uint32_t global_id = 0;
  uint32_t booth_id = 0;
  std::string address;
  bool signs_in = false;
  bool abstains = false;
  uint32_t vote = 0;  // 1-based candidate
  bool voted = false; // set during the run
};

struct ResolvedAttack {
  AttackSpec spec;
  uint32_t booth = 0;
  uint32_t voter = 0;  // global id when voter-targeted
  std::string expectation;
  std::string expected_check;   // audit-fail only
  std::string expected_status;  // ledger-reject only
  std::string detail;           // filled during the run
};

class ScenarioRun {
 public:
  explicit ScenarioRun(const ScenarioConfig& config) : config_(config) {}

  RunOutput Run();

 private:
  void BuildGroup();
  void BuildPlan();
  void ResolveAttacks();
  uint32_t PickActiveVoter(uint32_t booth, const char* attack_type) const;
  void Drive();
  void InjectLedgerAttack(ResolvedAttack& attack, uint64_t tick);
  Bytes TamperTranscript(const Bytes& honest, ResolvedAttack& attack);
  RunOutput Finish();

  // Drive helpers; throw on unexpected rejection.
  void Must(ApplyResult result, const char* what);

  const ScenarioConfig& config_;
  std::shared_ptr<const Group> group_;
  std::optional<DeterministicRng> master_;
  std::vector<VoterPlan> plan_;                  // index = global id - 1
  std::vector<DeterministicRng> voter_rng_;      // index = global id - 1
  std::map<uint32_t, VoterKeyMaterial> keys_;    // by global id
  std::vector<ResolvedAttack> attacks_;
  std::optional<Election> election_;
  RunResult result_;
  Bytes transcript_;
};

void ScenarioRun::Must(ApplyResult result, const char* what) {
  if (!result.ok()) {
    throw Error(std::string("scenario drive rejected at ") + what + ": " +
                LedgerStatusName(result.status) + " (" + result.message + ")");
  }
}

void ScenarioRun::BuildGroup() {
  if (!config_.group_bits.has_value()) {
    group_ = std::make_shared<Group>(Group::TestGroup());
    return;
  }
  unsigned bits = *config_.group_bits;
  if (bits == 2048) {
    group_ = std::make_shared<Group>(Group::Production2048());
    return;
  }
  Bytes seed = master_->Child("group").Take(32);
  group_ = std::make_shared<Group>(Group::Generate(bits, seed, SecurityLabel::kTest));
}

void ScenarioRun::BuildPlan() {
  plan_.resize(config_.voters);
  voter_rng_.reserve(config_.voters);
  std::set<uint32_t> abstainers(config_.forced_abstainers.begin(), config_.forced_abstainers.end());
  std::set<uint32_t> non_signers(config_.forced_non_signers.begin(),
                                 config_.forced_non_signers.end());
  for (uint32_t i = 1; i <= config_.voters; ++i) {
    VoterPlan& p = plan_[i - 1];
    p.global_id = i;
    p.booth_id = config_.BoothOf(i);
    p.address = VoterAddress(i);
    voter_rng_.push_back(master_->Child("voter-" + std::to_string(i)));
    DeterministicRng& rng = voter_rng_.back();
    // Decision draws happen in a fixed order so the stream is stable.
    bool sign_draw = rng.Chance(config_.signin_rate);
    bool abstain_draw = rng.Chance(config_.abstain_rate);
    uint32_t vote_draw = 1 + static_cast<uint32_t>(rng.UniformU64(config_.candidates));
    p.signs_in = non_signers.contains(i) ? false : sign_draw;
    p.abstains = abstainers.contains(i) ? true : abstain_draw;
    p.vote = i <= config_.fixed_votes.size() && config_.fixed_votes[i - 1] != 0
                 ? config_.fixed_votes[i - 1]
                 : vote_draw;
  }
}

uint32_t ScenarioRun::PickActiveVoter(uint32_t booth, const char* attack_type) const {
  for (const VoterPlan& p : plan_) {
    if (p.booth_id == booth && p.signs_in && !p.abstains) return p.global_id;
  }
  throw ConfigError(std::string(attack_type) + ": booth " + std::to_string(booth) +
                    " has no active voter");
}

void ScenarioRun::ResolveAttacks() {
  for (const AttackSpec& spec : config_.attacks) {
    ResolvedAttack attack;
    attack.spec = spec;
    attack.booth = spec.booth == 0 ? 1 : spec.booth;

    if (spec.type == kAttackTamperTranscript) {
      attack.expectation = "audit-fail";
      std::string target = spec.target.empty() ? "ballot" : spec.target;
      attack.spec.target = target;
      if (target == "ballot") attack.expected_check = kCheckBallotProofs;
      if (target == "result-counts") attack.expected_check = kCheckTallyEquations;
      if (target == "signin-order") attack.expected_check = kCheckMpcRecomputation;
    } else if (spec.type == kAttackStallRecovery) {
      attack.expectation = "booth-abort";
      // The booth needs an absent voter (to enter recovery) and at least
      // one present voter (to withhold a share).
      uint32_t signers = 0;
      for (const VoterPlan& p : plan_) {
        if (p.booth_id == attack.booth && p.signs_in) ++signers;
      }
      if (signers < 2) {
        throw ConfigError("stall-recovery: booth needs at least two signers");
      }
      bool has_absent = false;
      for (const VoterPlan& p : plan_) {
        if (p.booth_id == attack.booth && p.signs_in && p.abstains) has_absent = true;
      }
      if (!has_absent) {
        // Force the last signer of the booth to abstain.
        for (auto it = plan_.rbegin(); it != plan_.rend(); ++it) {
          if (it->booth_id == attack.booth && it->signs_in) {
            it->abstains = true;
            break;
          }
        }
      }
      attack.voter = PickActiveVoter(attack.booth, kAttackStallRecovery);
    } else if (spec.type == kAttackBadMpcKeys) {
      attack.expectation = "ledger-reject";
      attack.expected_status = LedgerStatusName(LedgerStatus::kMpcMismatch);
    } else {
      attack.expectation = "ledger-reject";
      if (spec.type == kAttackDoubleVote) {
        attack.expected_status = LedgerStatusName(LedgerStatus::kDoubleVote);
      } else if (spec.type == kAttackForgedBallot) {
        attack.expected_status = LedgerStatusName(LedgerStatus::kBadProof);
      } else {
        attack.expected_status = LedgerStatusName(LedgerStatus::kWrongPhase);
      }
      attack.voter = spec.voter == 0 ? PickActiveVoter(attack.booth, spec.type.c_str())
                                     : spec.voter;
      const VoterPlan& p = plan_.at(attack.voter - 1);
      if (p.booth_id != attack.booth || !p.signs_in || p.abstains) {
        throw ConfigError(spec.type + ": voter " + std::to_string(attack.voter) +
                          " is not an active voter of booth " + std::to_string(attack.booth));
      }
    }
    attacks_.push_back(std::move(attack));
  }
}

void ScenarioRun::InjectLedgerAttack(ResolvedAttack& attack, uint64_t tick) {
  Election& e = *election_;
  BoothContract& booth = e.booth(attack.booth);
  const Group& group = *group_;
  ApplyResult r;

  if (attack.spec.type == kAttackBadMpcKeys) {
    // Keys with the first entry multiplied by g; the contract recomputes
    // and refuses.
    std::vector<GroupElement> keys = DeriveMpcKeys(group, booth.roster());
    keys[0] = group.Mul(keys[0], group.generator());
    VoteEncoding enc = MakeEncoding(static_cast<uint32_t>(booth.roster().size()),
                                    config_.candidates, group.tally_capacity_bits());
    r = e.Record(booth.PublishMpc(kAuthority, tick, keys, enc));
    ++result_.proofs_verified;  // counts as one checked publication
  } else {
    const VoterPlan& p = plan_.at(attack.voter - 1);
    DeterministicRng& rng = voter_rng_.at(attack.voter - 1);
    const VoterKeyMaterial& key = keys_.at(attack.voter);
    auto index = booth.roster().IndexOf(p.address);
    const GroupElement& mpc_key = (*booth.mpc_keys())[*index - 1];
    const VoteEncoding& enc = *booth.encoding();
    ProofContext ctx = booth.ContextFor(p.address, kPhaseTagVote);

    if (attack.spec.type == kAttackWrongPhase) {
      Ballot early = CastBallot(group, ctx, key, mpc_key, p.vote, enc, rng);
      ++result_.proofs_generated;
      r = e.Record(booth.SubmitBallot(p.address, tick, early));
    } else if (attack.spec.type == kAttackForgedBallot) {
      Ballot forged = CastBallot(group, ctx, key, mpc_key, p.vote, enc, rng);
      ++result_.proofs_generated;
      forged.proof.branches[0].response =
          group.ScalarAdd(forged.proof.branches[0].response, group.ScalarFromUint(1));
      r = e.Record(booth.SubmitBallot(p.address, tick, forged));
      ++result_.proofs_verified;
    } else {  // double-vote
      uint32_t other = p.vote % config_.candidates + 1;
      Ballot second = CastBallot(group, ctx, key, mpc_key, other, enc, rng);
      ++result_.proofs_generated;
      r = e.Record(booth.SubmitBallot(p.address, tick, second));
    }
  }

  if (r.ok()) {
    attack.detail = "accepted (unexpected)";
  } else {
    attack.detail = LedgerStatusName(r.status);
  }
}

void ScenarioRun::Drive() {
  Election& e = *election_;
  const Group& group = *group_;
  auto stage_start = Clock::now();

  // Registration.
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    Must(e.Record(e.booth(b).AdvancePhase(kAuthority, 0, Phase::kRegistration)), "advance registration");
    std::vector<std::string> addresses;
    for (const VoterPlan& p : plan_) {
      if (p.booth_id == b) addresses.push_back(p.address);
    }
    if (!addresses.empty()) {
      Must(e.Record(e.booth(b).RegisterVoters(kAuthority, 0, addresses)), "register");
    }
  }

  // Sign-in.
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    Must(e.Record(e.booth(b).AdvancePhase(kAuthority, 1, Phase::kSignIn)), "advance signin");
  }
  for (VoterPlan& p : plan_) {
    if (!p.signs_in) continue;
    BoothContract& booth = e.booth(p.booth_id);
    ProofContext ctx = booth.ContextFor(p.address, kPhaseTagSignIn);
    VoterKeyMaterial key = Keygen(group, ctx, voter_rng_.at(p.global_id - 1));
    ++result_.proofs_generated;
    ++result_.proofs_verified;
    Must(e.Record(booth.SignIn(p.address, 1, key.public_key, key.signin_proof)), "sign in");
    keys_.emplace(p.global_id, std::move(key));
  }
  result_.stage_ms["signin"] = MsSince(stage_start);
  stage_start = Clock::now();

  // Pre-voting: publish blinding keys, or abort booths nobody joined.
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    BoothContract& booth = e.booth(b);
    Must(e.Record(booth.AdvancePhase(kAuthority, 2, Phase::kPreVoting)), "advance prevoting");
    if (booth.roster().empty()) {
      Must(e.Record(booth.Abort(kAuthority, 2, "no-signins")), "abort empty booth");
      continue;
    }
    for (ResolvedAttack& attack : attacks_) {
      if (attack.spec.type == kAttackBadMpcKeys && attack.booth == b) {
        InjectLedgerAttack(attack, 2);
      }
    }
    std::vector<GroupElement> keys = DeriveMpcKeys(group, booth.roster());
    VoteEncoding enc = MakeEncoding(static_cast<uint32_t>(booth.roster().size()),
                                    config_.candidates, group.tally_capacity_bits());
    Must(e.Record(booth.PublishMpc(kAuthority, 2, keys, enc)), "publish mpc");
    ++result_.proofs_verified;
  }
  for (ResolvedAttack& attack : attacks_) {
    if (attack.spec.type == kAttackWrongPhase &&
        e.booth(attack.booth).phase() == Phase::kPreVoting) {
      InjectLedgerAttack(attack, 2);
    }
  }
  result_.stage_ms["mpc"] = MsSince(stage_start);
  stage_start = Clock::now();

  // Voting.
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    if (e.booth(b).phase() == Phase::kPreVoting) {
      Must(e.Record(e.booth(b).AdvancePhase(kAuthority, 3, Phase::kVoting)), "advance voting");
    }
  }
  for (VoterPlan& p : plan_) {
    if (!p.signs_in || p.abstains) continue;
    BoothContract& booth = e.booth(p.booth_id);
    if (booth.phase() != Phase::kVoting) continue;
    ProofContext ctx = booth.ContextFor(p.address, kPhaseTagVote);
    auto index = booth.roster().IndexOf(p.address);
    const GroupElement& mpc_key = (*booth.mpc_keys())[*index - 1];
    Ballot ballot = CastBallot(group, ctx, keys_.at(p.global_id), mpc_key, p.vote,
                               *booth.encoding(), voter_rng_.at(p.global_id - 1));
    ++result_.proofs_generated;

    for (ResolvedAttack& attack : attacks_) {
      if (attack.spec.type == kAttackForgedBallot && attack.voter == p.global_id) {
        InjectLedgerAttack(attack, 3);
      }
    }
    Must(e.Record(booth.SubmitBallot(p.address, 3, ballot)), "submit ballot");
    ++result_.proofs_verified;
    p.voted = true;
    for (ResolvedAttack& attack : attacks_) {
      if (attack.spec.type == kAttackDoubleVote && attack.voter == p.global_id) {
        InjectLedgerAttack(attack, 3);
        ++result_.proofs_verified;
      }
    }
  }
  result_.stage_ms["vote"] = MsSince(stage_start);
  stage_start = Clock::now();

  // Close; stragglers force recovery.
  const uint64_t t_close = 3 + config_.windows.voting_ticks;
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    BoothContract& booth = e.booth(b);
    if (booth.phase() != Phase::kVoting) continue;
    Must(e.Record(booth.CloseVoting(kAuthority, t_close)), "close voting");
  }

  // Recovery shares from every present voter, minus stalled ones.
  for (VoterPlan& p : plan_) {
    if (!p.voted) continue;
    BoothContract& booth = e.booth(p.booth_id);
    if (booth.phase() != Phase::kRecovery) continue;
    bool stalled = false;
    for (ResolvedAttack& attack : attacks_) {
      if (attack.spec.type == kAttackStallRecovery && attack.voter == p.global_id) {
        stalled = true;
        attack.detail = "share withheld";
      }
    }
    if (stalled) continue;
    auto index = booth.roster().IndexOf(p.address);
    ProofContext ctx = booth.ContextFor(p.address, kPhaseTagRecovery);
    RecoveryShare share =
        MakeRecoveryShare(group, ctx, keys_.at(p.global_id), booth.roster(), booth.absent(),
                          static_cast<uint32_t>(*index), voter_rng_.at(p.global_id - 1));
    ++result_.proofs_generated;
    ++result_.proofs_verified;
    Must(e.Record(booth.SubmitRecovery(p.address, t_close, share)), "submit share");
  }
  result_.stage_ms["recovery"] = MsSince(stage_start);
  stage_start = Clock::now();

  // Finalize.  Tally booths may finalize immediately; recovery booths wait
  // for the share window to elapse.  Two passes keep event ticks
  // non-decreasing across booths.
  const uint64_t t_final = t_close + config_.windows.recovery_ticks;
  auto finalize_booth = [&](uint32_t b, uint64_t tick) {
    BoothContract& booth = e.booth(b);
    if (booth.phase() == Phase::kRecovery && booth.shares().size() < booth.ballots().size()) {
      BoothTally dummy;
      dummy.booth_id = b;
      Must(e.Record(booth.Finalize(kAuthority, tick, dummy)), "finalize stalled booth");
      return;
    }
    GroupElement tally = TallyProduct(group, booth.ballots(), booth.shares());
    uint64_t counted = booth.ballots().size();
    auto counts = DecodeTally(group, tally, counted, *booth.encoding());
    if (!counts.has_value()) {
      Must(e.Record(booth.Abort(kAuthority, tick, "decode-failure")), "abort undecodable");
      return;
    }
    BoothTally claimed;
    claimed.booth_id = b;
    claimed.ballots_counted = counted;
    claimed.counts = *counts;
    claimed.packed = booth.encoding()->Pack(*counts);
    claimed.tally = tally;
    Must(e.Record(booth.Finalize(kAuthority, tick, claimed)), "finalize");
  };
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    if (e.booth(b).phase() == Phase::kTally) finalize_booth(b, t_close);
  }
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    if (e.booth(b).phase() == Phase::kRecovery) finalize_booth(b, t_final);
  }
  result_.stage_ms["tally"] = MsSince(stage_start);

  // Report every booth to the main contract.
  for (uint32_t b = 1; b <= config_.booths; ++b) {
    BoothContract& booth = e.booth(b);
    std::string status = PhaseName(booth.phase());
    std::optional<BoothTally> tally = booth.finalized();
    Must(e.Record(e.main->AcceptResult(kAuthority, t_final, b, status, tally, booth)),
         "accept result");
  }
}

Bytes ScenarioRun::TamperTranscript(const Bytes& honest, ResolvedAttack& attack) {
  const Group& group = *group_;
  Json root = Json::parse(honest.begin(), honest.end());
  const std::string target = attack.spec.target;

  if (target == "result-counts") {
    for (Json& record : root["result"]["booths"]) {
      if (record["booth"].get<uint32_t>() != attack.booth || record["status"] != "closed") continue;
      Json& counts = record["tally"]["counts"];
      if (counts.size() >= 2) {
        for (size_t i = 0; i < counts.size(); ++i) {
          if (counts[i].get<uint64_t>() > 0) {
            size_t other = (i + 1) % counts.size();
            counts[i] = counts[i].get<uint64_t>() - 1;
            counts[other] = counts[other].get<uint64_t>() + 1;
            attack.detail = "result counts shifted";
            std::string text = DumpJson(root);
            return Bytes(text.begin(), text.end());
          }
        }
      }
    }
    // No shiftable counts; fall through to the ballot tamper.
  }

  if (target == "signin-order") {
    std::vector<size_t> signins;
    for (size_t i = 0; i < root["events"].size(); ++i) {
      const Json& ev = root["events"][i];
      if (ev["op"] == "sign_in" && ev["booth"].get<uint32_t>() == attack.booth) {
        signins.push_back(i);
      }
    }
    if (signins.size() >= 2) {
      Json& a = root["events"][signins[0]];
      Json& b = root["events"][signins[1]];
      for (const char* field : {"payload", "caller", "canonical"}) {
        Json tmp = a[field];
        a[field] = b[field];
        b[field] = tmp;
      }
      attack.detail = "sign-in order swapped";
      std::string text = DumpJson(root);
      return Bytes(text.begin(), text.end());
    }
  }

  // Default: multiply the first ballot of the booth by g.  The element
  // stays a group member, so the tamper is caught by proof verification
  // rather than import.
  for (Json& ev : root["events"]) {
    if (ev["op"] != "ballot" || ev["booth"].get<uint32_t>() != attack.booth) continue;
    Bytes bytes;
    HexDecode(ev["payload"]["b"].get<std::string>(), &bytes);
    GroupElement b = *group.DecodeElement(bytes);
    GroupElement tampered = group.Mul(b, group.generator());
    ev["payload"]["b"] = group.ElementHex(tampered);
    attack.detail = "ballot element multiplied by g";
    attack.expected_check = kCheckBallotProofs;
    std::string text = DumpJson(root);
    return Bytes(text.begin(), text.end());
  }
  throw ConfigError("tamper-transcript: booth " + std::to_string(attack.booth) +
                    " has nothing to tamper");
}

RunOutput ScenarioRun::Finish() {
  Election& e = *election_;
  const ElectionResult& agg = *e.main->aggregate();

  result_.election_id = config_.election_id;
  result_.candidates = config_.candidates;
  result_.totals = agg.totals;
  result_.partial = agg.partial;
  result_.expected_totals.assign(config_.candidates, 0);

  for (uint32_t b = 1; b <= config_.booths; ++b) {
    const BoothContract& booth = e.booth(b);
    BoothRunSummary summary;
    summary.booth_id = b;
    summary.status = PhaseName(booth.phase());
    summary.abort_reason = booth.abort_reason();
    summary.signins = booth.roster().size();
    summary.ballots = booth.ballots().size();
    summary.expected_counts.assign(config_.candidates, 0);
    for (const VoterPlan& p : plan_) {
      if (p.booth_id == b && p.voted) ++summary.expected_counts[p.vote - 1];
    }
    if (booth.phase() == Phase::kClosed) {
      summary.counts = booth.finalized()->counts;
      for (uint32_t j = 0; j < config_.candidates; ++j) {
        result_.expected_totals[j] += summary.expected_counts[j];
      }
    }
    result_.booths.push_back(std::move(summary));
  }

  result_.totals_match = result_.totals == result_.expected_totals;
  for (const BoothRunSummary& s : result_.booths) {
    if (s.status == "closed" && s.counts != s.expected_counts) result_.totals_match = false;
  }

  RunOutput out;
  out.transcript = transcript_;

  if (!attacks_.empty()) {
    Json list = Json::array();
    for (const ResolvedAttack& attack : attacks_) {
      AttackOutcome outcome;
      outcome.type = attack.spec.type;
      outcome.booth = attack.booth;
      outcome.voter = attack.voter;
      outcome.expectation = attack.expectation;
      outcome.check = attack.expected_check;
      outcome.detail = attack.detail;
      result_.attacks.push_back(outcome);

      Json aj{{"type", attack.spec.type},
              {"booth", attack.booth},
              {"expectation", attack.expectation}};
      if (attack.voter != 0) aj["voter"] = attack.voter;
      if (!attack.expected_check.empty()) aj["check"] = attack.expected_check;
      if (!attack.expected_status.empty()) aj["status"] = attack.expected_status;
      if (!attack.spec.target.empty()) aj["target"] = attack.spec.target;
      list.push_back(std::move(aj));
    }
    out.expectations = Json{{"attacks", list}};
  }

  out.result = result_;
  return out;
}

RunOutput ScenarioRun::Run() {
  auto total_start = Clock::now();
  config_.Validate();
  master_ = DeterministicRng::FromSeed(config_.seed).Child("run");

  auto group_start = Clock::now();
  BuildGroup();
  result_.stage_ms["group"] = MsSince(group_start);

  BuildPlan();
  ResolveAttacks();

  std::vector<std::string> candidate_names;
  for (uint32_t j = 1; j <= config_.candidates; ++j) {
    candidate_names.push_back("candidate-" + std::to_string(j));
  }
  election_ = MakeElection(group_, config_.election_id, kAuthority, candidate_names,
                           config_.booths, config_.windows);

  Drive();

  auto export_start = Clock::now();
  transcript_ = ExportTranscript(*election_);
  for (ResolvedAttack& attack : attacks_) {
    if (attack.spec.type == kAttackTamperTranscript) {
      transcript_ = TamperTranscript(transcript_, attack);
    }
  }
  result_.stage_ms["export"] = MsSince(export_start);
  result_.stage_ms["total"] = MsSince(total_start);
  return Finish();
}

}  // namespace

Json RunResult::ToJson() const {
  Json booths_json = Json::array();
  for (const BoothRunSummary& s : booths) {
    Json bj{{"booth", s.booth_id},
            {"status", s.status},
            {"signins", s.signins},
            {"ballots", s.ballots},
            {"expected_counts", s.expected_counts}};
    if (!s.counts.empty()) bj["counts"] = s.counts;
    if (!s.abort_reason.empty()) bj["abort_reason"] = s.abort_reason;
    booths_json.push_back(std::move(bj));
  }
  Json attacks_json = Json::array();
  for (const AttackOutcome& a : attacks) {
    Json aj{{"type", a.type},
            {"booth", a.booth},
            {"expectation", a.expectation},
            {"detail", a.detail}};
    if (a.voter != 0) aj["voter"] = a.voter;
    if (!a.check.empty()) aj["check"] = a.check;
    attacks_json.push_back(std::move(aj));
  }
  Json timings = Json::object();
  for (const auto& [stage, ms] : stage_ms) timings[stage] = ms;

  return Json{{"election_id", election_id},
              {"candidates", candidates},
              {"booths", booths_json},
              {"totals", totals},
              {"partial", partial},
              {"expected_totals", expected_totals},
              {"totals_match", totals_match},
              {"attacks", attacks_json},
              {"timings_ms", timings},
              {"proofs_generated", proofs_generated},
              {"proofs_verified", proofs_verified}};
}

RunOutput RunScenario(const ScenarioConfig& config) { return ScenarioRun(config).Run(); }

std::string BenchCsv(const ScenarioConfig& config, const RunResult& result) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "voters," << config.voters << "\n";
  os << "candidates," << config.candidates << "\n";
  os << "booths," << config.booths << "\n";
  os << "group_bits," << (config.group_bits.has_value() ? *config.group_bits : 5) << "\n";
  for (const auto& [stage, ms] : result.stage_ms) {
    os << stage << "_ms," << ms << "\n";
  }
  // Per-phase throughput: items processed per second for the phases that
  // scale with participation.
  uint64_t signins = 0;
  uint64_t ballots = 0;
  uint64_t shares = 0;
  for (const auto& booth : result.booths) {
    signins += booth.signins;
    ballots += booth.ballots;
    // One share per present voter, only in booths that entered recovery.
    if (booth.signins > booth.ballots) shares += booth.ballots;
  }
  auto rate = [&os](const char* name, uint64_t items, double ms) {
    if (ms <= 0.0) return;
    os << name << "_per_s," << (static_cast<double>(items) * 1000.0 / ms) << "\n";
  };
  auto stage_of = [&result](const char* stage) {
    auto it = result.stage_ms.find(stage);
    return it == result.stage_ms.end() ? 0.0 : it->second;
  };
  rate("signin", signins, stage_of("signin"));
  rate("vote", ballots, stage_of("vote"));
  rate("recovery", shares, stage_of("recovery"));
  rate("tally", ballots, stage_of("tally"));
  os << "proofs_generated," << result.proofs_generated << "\n";
  os << "proofs_verified," << result.proofs_verified << "\n";
  os << "totals_match," << (result.totals_match ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace sbl
