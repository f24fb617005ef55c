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

#include "ledger.hpp"

#include <algorithm>

#include "hashing.hpp"

namespace sbl {

const char* PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kSetup: return "setup";
    case Phase::kRegistration: return "registration";
    case Phase::kSignIn: return "signin";
    case Phase::kPreVoting: return "prevoting";
    case Phase::kVoting: return "voting";
    case Phase::kRecovery: return "recovery";
    case Phase::kTally: return "tally";
    case Phase::kClosed: return "closed";
    case Phase::kAborted: return "aborted";
  }
  return "unknown";
}

std::optional<Phase> PhaseFromName(std::string_view name) {
  for (Phase p : {Phase::kSetup, Phase::kRegistration, Phase::kSignIn, Phase::kPreVoting,
                  Phase::kVoting, Phase::kRecovery, Phase::kTally, Phase::kClosed,
                  Phase::kAborted}) {
    if (name == PhaseName(p)) return p;
  }
  return std::nullopt;
}

bool PhaseIsTerminal(Phase phase) { return phase == Phase::kClosed || phase == Phase::kAborted; }

const char* LedgerStatusName(LedgerStatus status) {
  switch (status) {
    case LedgerStatus::kOk: return "ok";
    case LedgerStatus::kWrongPhase: return "wrong-phase";
    case LedgerStatus::kNotAuthority: return "not-authority";
    case LedgerStatus::kNotEligible: return "not-eligible";
    case LedgerStatus::kDuplicateSignIn: return "duplicate-signin";
    case LedgerStatus::kBadProof: return "bad-proof";
    case LedgerStatus::kMpcMismatch: return "mpc-mismatch";
    case LedgerStatus::kEncodingMismatch: return "encoding-mismatch";
    case LedgerStatus::kNotSignedIn: return "not-signed-in";
    case LedgerStatus::kDoubleVote: return "double-vote";
    case LedgerStatus::kNotAVoter: return "not-a-voter";
    case LedgerStatus::kAbsentSetMismatch: return "absent-set-mismatch";
    case LedgerStatus::kDuplicateShare: return "duplicate-share";
    case LedgerStatus::kTallyMismatch: return "tally-mismatch";
    case LedgerStatus::kDeadlineNotReached: return "deadline-not-reached";
    case LedgerStatus::kIllegalTransition: return "illegal-transition";
    case LedgerStatus::kUnknownBooth: return "unknown-booth";
    case LedgerStatus::kResultMismatch: return "result-mismatch";
    case LedgerStatus::kAlreadyReported: return "already-reported";
    case LedgerStatus::kBadRequest: return "bad-request";
  }
  return "unknown";
}

ApplyResult ApplyResult::Reject(LedgerStatus status, std::string message) {
  return ApplyResult{status, std::move(message), std::nullopt};
}

BoothContract::BoothContract(std::shared_ptr<const Group> group, std::string election_id,
                             uint32_t booth_id, std::string authority, uint32_t candidates,
                             PhaseWindows windows)
    : group_(std::move(group)),
      election_id_(std::move(election_id)),
      booth_id_(booth_id),
      authority_(std::move(authority)),
      candidates_(candidates),
      windows_(windows) {
  if (booth_id_ == 0) throw Error("booth id 0 is reserved");
  if (candidates_ == 0) throw Error("booth needs at least one candidate");
}

ProofContext BoothContract::ContextFor(const std::string& address,
                                       std::string_view phase_tag) const {
  return ProofContext{election_id_, booth_id_, address, std::string(phase_tag)};
}

bool BoothContract::HasVoted(const std::string& address) const { return voted_.contains(address); }

namespace {

// Canonical bytes commit to the full event header plus the artifact encoding.
// Replay regenerates them, so any divergent field is detected even when the
// mutated value would otherwise replay cleanly (ticks, echoed payloads).
Bytes EventCanonical(uint64_t tick, uint32_t booth_id, const std::string& op,
                     const std::string& caller, const Json& payload, const Bytes& artifact) {
  Bytes tick_bytes;
  AppendU64(tick_bytes, tick);
  Bytes booth_bytes;
  AppendU32(booth_bytes, booth_id);
  const std::string payload_text = payload.dump();
  const Digest payload_digest = Sha256(reinterpret_cast<const uint8_t*>(payload_text.data()),
                                       payload_text.size());
  return EncodeByteList("sbl/event/v1",
                        {tick_bytes, booth_bytes, Bytes(op.begin(), op.end()),
                         Bytes(caller.begin(), caller.end()),
                         Bytes(payload_digest.begin(), payload_digest.end()), artifact});
}

}  // namespace

Event BoothContract::MakeEvent(uint64_t tick, const char* op, const std::string& caller,
                               Json payload, const Bytes& canonical) const {
  Event e;
  e.tick = tick;
  e.booth_id = booth_id_;
  e.op = op;
  e.caller = caller;
  e.payload = std::move(payload);
  e.canonical_hex = HexEncode(EventCanonical(tick, booth_id_, op, caller, e.payload, canonical));
  return e;
}

ApplyResult BoothContract::AdvancePhase(const std::string& caller, uint64_t tick, Phase target) {
  if (caller != authority_) return ApplyResult::Reject(LedgerStatus::kNotAuthority, "advance requires the authority");
  if (PhaseIsTerminal(phase_)) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "booth is terminal");
  static const std::pair<Phase, Phase> kLegal[] = {
      {Phase::kSetup, Phase::kRegistration},
      {Phase::kRegistration, Phase::kSignIn},
      {Phase::kSignIn, Phase::kPreVoting},
      {Phase::kPreVoting, Phase::kVoting},
  };
  bool legal = false;
  for (auto [from, to] : kLegal) legal = legal || (phase_ == from && target == to);
  if (!legal) {
    return ApplyResult::Reject(LedgerStatus::kIllegalTransition,
                               std::string("no transition ") + PhaseName(phase_) + " -> " +
                                   PhaseName(target));
  }
  if (target == Phase::kVoting && !mpc_keys_.has_value()) {
    return ApplyResult::Reject(LedgerStatus::kIllegalTransition,
                               "voting cannot open before blinding keys are published");
  }

  phase_ = target;
  if (target == Phase::kVoting) voting_deadline_ = tick + windows_.voting_ticks;
  Json payload{{"target", PhaseName(target)}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "advance", caller, std::move(payload), {});
  return result;
}

ApplyResult BoothContract::RegisterVoters(const std::string& caller, uint64_t tick,
                                          const std::vector<std::string>& addresses) {
  if (caller != authority_) return ApplyResult::Reject(LedgerStatus::kNotAuthority, "register requires the authority");
  if (phase_ != Phase::kRegistration) {
    return ApplyResult::Reject(LedgerStatus::kWrongPhase, "registration is not open");
  }
  if (addresses.empty()) return ApplyResult::Reject(LedgerStatus::kBadRequest, "empty address list");
  std::set<std::string> batch;
  for (const std::string& a : addresses) {
    if (a.empty()) return ApplyResult::Reject(LedgerStatus::kBadRequest, "empty address");
    if (!batch.insert(a).second || eligible_lookup_.contains(a)) {
      return ApplyResult::Reject(LedgerStatus::kBadRequest, "duplicate address " + a);
    }
  }

  for (const std::string& a : addresses) {
    eligible_.push_back(a);
    eligible_lookup_.insert(a);
  }
  Json payload{{"addresses", addresses}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "register", caller, std::move(payload), {});
  return result;
}

ApplyResult BoothContract::SignIn(const std::string& caller, uint64_t tick,
                                  const GroupElement& public_key, const SchnorrProof& proof) {
  if (phase_ != Phase::kSignIn) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "sign-in is not open");
  if (!eligible_lookup_.contains(caller)) {
    return ApplyResult::Reject(LedgerStatus::kNotEligible, caller + " is not registered");
  }
  if (roster_.IndexOf(caller).has_value()) {
    return ApplyResult::Reject(LedgerStatus::kDuplicateSignIn, caller + " already signed in");
  }
  VerifyOutcome outcome = VerifySchnorr(*group_, ContextFor(caller, kPhaseTagSignIn), public_key, proof);
  if (!outcome.ok) {
    return ApplyResult::Reject(LedgerStatus::kBadProof,
                               std::string("sign-in proof rejected: ") + ProofRejectName(outcome.reason));
  }

  roster_.Add(caller, public_key);
  Json payload{{"x", ElementJson(*group_, public_key)}, {"proof", SchnorrProofJson(*group_, proof)}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "sign_in", caller, std::move(payload),
                           CanonicalSignIn(*group_, public_key, proof));
  return result;
}

ApplyResult BoothContract::PublishMpc(const std::string& caller, uint64_t tick,
                                      const std::vector<GroupElement>& keys,
                                      const VoteEncoding& encoding) {
  if (caller != authority_) return ApplyResult::Reject(LedgerStatus::kNotAuthority, "publish requires the authority");
  if (phase_ != Phase::kPreVoting) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "not in pre-voting");
  if (mpc_keys_.has_value()) return ApplyResult::Reject(LedgerStatus::kBadRequest, "keys already published");
  if (roster_.empty()) return ApplyResult::Reject(LedgerStatus::kBadRequest, "no one signed in");

  // The contract recomputes the blinding keys itself; the publication must
  // match exactly or some voter could be handed a rigged key.
  std::vector<GroupElement> expected = DeriveMpcKeys(*group_, roster_);
  if (keys != expected) {
    return ApplyResult::Reject(LedgerStatus::kMpcMismatch, "published keys disagree with roster");
  }
  VoteEncoding expected_encoding;
  try {
    expected_encoding = MakeEncoding(static_cast<uint32_t>(roster_.size()), candidates_,
                                     group_->tally_capacity_bits());
  } catch (const CapacityError& e) {
    return ApplyResult::Reject(LedgerStatus::kEncodingMismatch, e.what());
  }
  if (!(encoding == expected_encoding)) {
    return ApplyResult::Reject(LedgerStatus::kEncodingMismatch, "encoding disagrees with roster size");
  }

  mpc_keys_ = keys;
  encoding_ = encoding;
  Json key_list = Json::array();
  for (const GroupElement& k : keys) key_list.push_back(ElementJson(*group_, k));
  Json payload{{"keys", key_list}, {"encoding", VoteEncodingJson(encoding)}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "publish_mpc", caller, std::move(payload),
                           CanonicalMpc(*group_, keys, encoding));
  return result;
}

ApplyResult BoothContract::SubmitBallot(const std::string& caller, uint64_t tick,
                                        const Ballot& ballot) {
  if (phase_ != Phase::kVoting) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "voting is not open");
  if (tick >= voting_deadline_) {
    return ApplyResult::Reject(LedgerStatus::kWrongPhase, "voting window elapsed");
  }
  if (caller != ballot.address) {
    return ApplyResult::Reject(LedgerStatus::kBadRequest, "ballot sender mismatch");
  }
  auto index = roster_.IndexOf(caller);
  if (!index.has_value()) return ApplyResult::Reject(LedgerStatus::kNotSignedIn, caller + " never signed in");
  if (voted_.contains(caller)) return ApplyResult::Reject(LedgerStatus::kDoubleVote, caller + " already voted");

  const GroupElement& voter_key = roster_.entry(*index).public_key;
  const GroupElement& mpc_key = (*mpc_keys_)[*index - 1];
  VerifyOutcome outcome = VerifyVote(*group_, ContextFor(caller, kPhaseTagVote), voter_key, mpc_key,
                                     ballot.blinded, ballot.proof, encoding_->AllExponents(*group_));
  if (!outcome.ok) {
    return ApplyResult::Reject(LedgerStatus::kBadProof,
                               std::string("ballot proof rejected: ") + ProofRejectName(outcome.reason));
  }

  ballots_.push_back(ballot);
  voted_.insert(caller);
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "ballot", caller, BallotJson(*group_, ballot),
                           CanonicalBallot(*group_, ballot));
  return result;
}

ApplyResult BoothContract::CloseVoting(const std::string& caller, uint64_t tick) {
  if (caller != authority_) return ApplyResult::Reject(LedgerStatus::kNotAuthority, "close requires the authority");
  if (phase_ != Phase::kVoting) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "not in voting");
  if (tick < voting_deadline_) {
    return ApplyResult::Reject(LedgerStatus::kDeadlineNotReached, "voting window still open");
  }

  std::set<uint32_t> absent;
  for (size_t i = 1; i <= roster_.size(); ++i) {
    if (!voted_.contains(roster_.entry(i).address)) absent.insert(static_cast<uint32_t>(i));
  }

  const char* outcome = nullptr;
  if (ballots_.empty()) {
    phase_ = Phase::kAborted;
    abort_reason_ = "no-ballots";
    outcome = "aborted";
  } else if (absent.empty()) {
    phase_ = Phase::kTally;
    outcome = "tally";
  } else {
    phase_ = Phase::kRecovery;
    absent_ = absent;
    recovery_deadline_ = tick + windows_.recovery_ticks;
    outcome = "recovery";
  }

  Json absent_list = Json::array();
  for (uint32_t i : absent) absent_list.push_back(i);
  Json payload{{"outcome", outcome}, {"absent", absent_list}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "close_voting", caller, std::move(payload), {});
  return result;
}

ApplyResult BoothContract::SubmitRecovery(const std::string& caller, uint64_t tick,
                                          const RecoveryShare& share) {
  if (phase_ != Phase::kRecovery) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "not in recovery");
  if (tick >= recovery_deadline_) {
    return ApplyResult::Reject(LedgerStatus::kWrongPhase, "recovery window elapsed");
  }
  if (caller != share.address) {
    return ApplyResult::Reject(LedgerStatus::kBadRequest, "share sender mismatch");
  }
  auto index = roster_.IndexOf(caller);
  if (!index.has_value()) return ApplyResult::Reject(LedgerStatus::kNotSignedIn, caller + " never signed in");
  if (absent_.contains(static_cast<uint32_t>(*index))) {
    return ApplyResult::Reject(LedgerStatus::kNotAVoter, "absent voters have no share to submit");
  }
  if (shared_.contains(caller)) return ApplyResult::Reject(LedgerStatus::kDuplicateShare, caller + " already submitted");
  if (share.absent_hash != AbsentSetHash(absent_)) {
    return ApplyResult::Reject(LedgerStatus::kAbsentSetMismatch, "share targets a different absent set");
  }

  const GroupElement& voter_key = roster_.entry(*index).public_key;
  VerifyOutcome outcome =
      VerifyRecoveryShare(*group_, ContextFor(caller, kPhaseTagRecovery), roster_, absent_,
                          static_cast<uint32_t>(*index), voter_key, share);
  if (!outcome.ok) {
    return ApplyResult::Reject(LedgerStatus::kBadProof,
                               std::string("recovery proof rejected: ") + ProofRejectName(outcome.reason));
  }

  shares_.push_back(share);
  shared_.insert(caller);
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "recovery", caller, RecoveryShareJson(*group_, share),
                           CanonicalShare(*group_, share));
  return result;
}

ApplyResult BoothContract::Finalize(const std::string& caller, uint64_t tick,
                                    const BoothTally& claimed) {
  if (caller != authority_) return ApplyResult::Reject(LedgerStatus::kNotAuthority, "finalize requires the authority");
  if (phase_ != Phase::kTally && phase_ != Phase::kRecovery) {
    return ApplyResult::Reject(LedgerStatus::kWrongPhase, "nothing to finalize");
  }
  if (phase_ == Phase::kRecovery && tick < recovery_deadline_) {
    return ApplyResult::Reject(LedgerStatus::kDeadlineNotReached, "recovery window still open");
  }

  if (phase_ == Phase::kRecovery && shares_.size() < ballots_.size()) {
    // A present voter withheld their share; the booth cannot produce a
    // correct tally and gives up.
    phase_ = Phase::kAborted;
    abort_reason_ = "missing-shares";
    Json payload{{"outcome", "aborted"}, {"reason", abort_reason_}};
    ApplyResult result;
    result.status = LedgerStatus::kOk;
    result.event = MakeEvent(tick, "finalize", caller, std::move(payload), {});
    return result;
  }

  auto reject = [&](const std::string& why) {
    return ApplyResult::Reject(LedgerStatus::kTallyMismatch, why);
  };
  if (claimed.booth_id != booth_id_) return reject("tally names the wrong booth");
  if (claimed.ballots_counted != ballots_.size()) return reject("ballot count mismatch");
  if (claimed.counts.size() != candidates_) return reject("count vector size mismatch");
  const VoteEncoding& enc = *encoding_;
  uint64_t field_limit = uint64_t{1} << enc.bits_per_candidate;
  uint64_t sum = 0;
  for (uint64_t c : claimed.counts) {
    if (c >= field_limit) return reject("count overflows its field");
    sum += c;
  }
  if (sum != claimed.ballots_counted) return reject("counts do not sum to the ballot total");
  if (claimed.packed != enc.Pack(claimed.counts)) return reject("packed sum mismatch");
  GroupElement actual = TallyProduct(*group_, ballots_, shares_);
  if (!(claimed.tally == actual)) return reject("tally product mismatch");
  if (!(group_->ExpPublic(group_->generator(), claimed.packed) == actual)) {
    return reject("tally does not open to the claimed counts");
  }

  finalized_ = claimed;
  phase_ = Phase::kClosed;
  Json payload{{"outcome", "closed"}, {"tally", BoothTallyJson(*group_, claimed)}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "finalize", caller, std::move(payload),
                           CanonicalTally(*group_, claimed));
  return result;
}

ApplyResult BoothContract::Abort(const std::string& caller, uint64_t tick,
                                 const std::string& reason) {
  if (caller != authority_) return ApplyResult::Reject(LedgerStatus::kNotAuthority, "abort requires the authority");
  if (PhaseIsTerminal(phase_)) return ApplyResult::Reject(LedgerStatus::kWrongPhase, "booth is terminal");

  phase_ = Phase::kAborted;
  abort_reason_ = reason.empty() ? "unspecified" : reason;
  Json payload{{"reason", abort_reason_}};
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  result.event = MakeEvent(tick, "abort", caller, std::move(payload), {});
  return result;
}

namespace {

bool SameEvent(const Event& recorded, const Event& regenerated) {
  return recorded.op == regenerated.op && recorded.payload == regenerated.payload &&
         recorded.canonical_hex == regenerated.canonical_hex;
}

ApplyResult FinishReplay(const Event& recorded, ApplyResult result) {
  if (!result.ok()) return result;
  if (!result.event.has_value() || !SameEvent(recorded, *result.event)) {
    return ApplyResult::Reject(LedgerStatus::kBadRequest, "replayed event diverges from the record");
  }
  result.event->seq = recorded.seq;
  return result;
}

}  // namespace

ApplyResult BoothContract::ApplyEvent(const Event& event) {
  if (event.booth_id != booth_id_) {
    return ApplyResult::Reject(LedgerStatus::kUnknownBooth, "event targets another booth");
  }
  Decoder dec{*group_};
  auto malformed = [&](const std::string& why) {
    return ApplyResult::Reject(LedgerStatus::kBadRequest, "undecodable event: " + why);
  };

  if (event.op == "advance") {
    auto name = dec.StringField(event.payload, "target");
    if (!name) return malformed(dec.detail);
    auto target = PhaseFromName(*name);
    if (!target) return malformed("unknown phase " + *name);
    return FinishReplay(event, AdvancePhase(event.caller, event.tick, *target));
  }
  if (event.op == "register") {
    if (!event.payload.contains("addresses") || !event.payload["addresses"].is_array()) {
      return malformed("missing addresses");
    }
    std::vector<std::string> addresses;
    for (const Json& a : event.payload["addresses"]) {
      if (!a.is_string()) return malformed("bad address entry");
      addresses.push_back(a.get<std::string>());
    }
    return FinishReplay(event, RegisterVoters(event.caller, event.tick, addresses));
  }
  if (event.op == "sign_in") {
    auto x = dec.Element(event.payload, "x");
    if (!x || !event.payload.contains("proof")) return malformed(dec.detail);
    auto proof = SchnorrProofFromJson(dec, event.payload["proof"]);
    if (!proof) return malformed(dec.detail);
    return FinishReplay(event, SignIn(event.caller, event.tick, *x, *proof));
  }
  if (event.op == "publish_mpc") {
    if (!event.payload.contains("keys") || !event.payload["keys"].is_array() ||
        !event.payload.contains("encoding")) {
      return malformed("missing keys or encoding");
    }
    std::vector<GroupElement> keys;
    for (const Json& kj : event.payload["keys"]) {
      if (!kj.is_string()) return malformed("bad key entry");
      Bytes bytes;
      if (!HexDecode(kj.get<std::string>(), &bytes)) return malformed("bad key hex");
      auto key = group_->DecodeElement(bytes);
      if (!key) return malformed("key is not a group member");
      keys.push_back(*key);
    }
    auto encoding = VoteEncodingFromJson(dec, event.payload["encoding"]);
    if (!encoding) return malformed(dec.detail);
    return FinishReplay(event, PublishMpc(event.caller, event.tick, keys, *encoding));
  }
  if (event.op == "ballot") {
    auto ballot = BallotFromJson(dec, event.payload);
    if (!ballot) return malformed(dec.detail);
    return FinishReplay(event, SubmitBallot(event.caller, event.tick, *ballot));
  }
  if (event.op == "close_voting") {
    return FinishReplay(event, CloseVoting(event.caller, event.tick));
  }
  if (event.op == "recovery") {
    auto share = RecoveryShareFromJson(dec, event.payload);
    if (!share) return malformed(dec.detail);
    return FinishReplay(event, SubmitRecovery(event.caller, event.tick, *share));
  }
  if (event.op == "finalize") {
    BoothTally claimed;
    if (event.payload.contains("tally")) {
      auto tally = BoothTallyFromJson(dec, event.payload["tally"]);
      if (!tally) return malformed(dec.detail);
      claimed = *tally;
    }
    return FinishReplay(event, Finalize(event.caller, event.tick, claimed));
  }
  if (event.op == "abort") {
    auto reason = dec.StringField(event.payload, "reason");
    if (!reason) return malformed(dec.detail);
    return FinishReplay(event, Abort(event.caller, event.tick, *reason));
  }
  return ApplyResult::Reject(LedgerStatus::kBadRequest, "unknown op " + event.op);
}

Json BoothContract::SerializeState() const {
  Json roster = Json::array();
  for (const RosterEntry& e : roster_.entries()) {
    roster.push_back(Json{{"address", e.address}, {"key", ElementJson(*group_, e.public_key)}});
  }
  Json ballots = Json::array();
  for (const Ballot& b : ballots_) ballots.push_back(BallotJson(*group_, b));
  Json shares = Json::array();
  for (const RecoveryShare& s : shares_) shares.push_back(RecoveryShareJson(*group_, s));
  Json absent = Json::array();
  for (uint32_t i : absent_) absent.push_back(i);

  Json j{{"booth", booth_id_},
         {"phase", PhaseName(phase_)},
         {"eligible", eligible_},
         {"roster", roster},
         {"ballots", ballots},
         {"shares", shares},
         {"absent", absent},
         {"voting_deadline", voting_deadline_},
         {"recovery_deadline", recovery_deadline_},
         {"abort_reason", abort_reason_}};
  if (mpc_keys_.has_value()) {
    Json keys = Json::array();
    for (const GroupElement& k : *mpc_keys_) keys.push_back(ElementJson(*group_, k));
    j["mpc_keys"] = keys;
  }
  if (encoding_.has_value()) j["encoding"] = VoteEncodingJson(*encoding_);
  if (finalized_.has_value()) j["finalized"] = BoothTallyJson(*group_, *finalized_);
  return j;
}

MainContract::MainContract(std::string election_id, std::string authority, uint32_t booth_count,
                           uint32_t candidates)
    : election_id_(std::move(election_id)),
      authority_(std::move(authority)),
      booth_count_(booth_count),
      candidates_(candidates) {}

ApplyResult MainContract::AcceptResult(const std::string& caller, uint64_t tick, uint32_t booth_id,
                                       const std::string& claimed_status,
                                       const std::optional<BoothTally>& claimed_tally,
                                       const BoothContract& booth) {
  if (booth_id == 0 || booth_id > booth_count_ || booth.booth_id() != booth_id) {
    return ApplyResult::Reject(LedgerStatus::kUnknownBooth, "no such booth");
  }
  if (reported_.contains(booth_id)) {
    return ApplyResult::Reject(LedgerStatus::kAlreadyReported, "booth already reported");
  }
  if (!PhaseIsTerminal(booth.phase())) {
    return ApplyResult::Reject(LedgerStatus::kWrongPhase, "booth has not terminated");
  }
  std::string actual_status = PhaseName(booth.phase());
  if (claimed_status != actual_status) {
    return ApplyResult::Reject(LedgerStatus::kResultMismatch, "claimed status disagrees with booth");
  }
  if (booth.phase() == Phase::kClosed) {
    if (!claimed_tally.has_value() || !booth.finalized().has_value() ||
        !(*claimed_tally == *booth.finalized())) {
      return ApplyResult::Reject(LedgerStatus::kResultMismatch, "claimed tally disagrees with booth");
    }
  } else if (claimed_tally.has_value()) {
    return ApplyResult::Reject(LedgerStatus::kResultMismatch, "aborted booth cannot carry a tally");
  }

  BoothOutcome outcome;
  outcome.booth_id = booth_id;
  outcome.status = booth.phase() == Phase::kClosed ? BoothStatus::kClosed : BoothStatus::kAborted;
  outcome.tally = claimed_tally;
  reported_.insert(booth_id);
  outcomes_[booth_id] = outcome;
  if (AllReported()) {
    std::vector<BoothOutcome> ordered;
    ordered.reserve(outcomes_.size());
    for (const auto& [id, o] : outcomes_) ordered.push_back(o);
    aggregate_ = Aggregate(ordered, candidates_);
  }

  Json payload{{"booth", booth_id}, {"status", claimed_status}};
  Bytes canonical;
  if (claimed_tally.has_value()) {
    payload["tally"] = BoothTallyJson(booth.group(), *claimed_tally);
    canonical = CanonicalTally(booth.group(), *claimed_tally);
  }
  ApplyResult result;
  result.status = LedgerStatus::kOk;
  const std::string canonical_hex =
      HexEncode(EventCanonical(tick, 0, "accept_result", caller, payload, canonical));
  result.event = Event{tick, 0, 0, "accept_result", caller, std::move(payload), canonical_hex};
  return result;
}

Json MainContract::SerializeState() const {
  Json booths = Json::object();
  for (const auto& [id, o] : outcomes_) {
    Json entry{{"status", o.status == BoothStatus::kClosed ? "closed" : "aborted"}};
    booths[std::to_string(id)] = entry;
  }
  Json j{{"booths", booths}, {"all_reported", AllReported()}};
  if (aggregate_.has_value()) {
    j["totals"] = aggregate_->totals;
    j["partial"] = aggregate_->partial;
  }
  return j;
}

ApplyResult MainContract::ApplyEvent(const Event& event, const BoothContract& booth) {
  if (event.booth_id != 0 || event.op != "accept_result") {
    return ApplyResult::Reject(LedgerStatus::kBadRequest, "not a main-contract event");
  }
  if (!event.payload.contains("booth") || !event.payload["booth"].is_number_unsigned() ||
      !event.payload.contains("status") || !event.payload["status"].is_string()) {
    return ApplyResult::Reject(LedgerStatus::kBadRequest, "undecodable event");
  }
  uint32_t booth_id = event.payload["booth"].get<uint32_t>();
  std::string status = event.payload["status"].get<std::string>();
  std::optional<BoothTally> tally;
  if (event.payload.contains("tally")) {
    Decoder dec{booth.group()};
    auto decoded = BoothTallyFromJson(dec, event.payload["tally"]);
    if (!decoded) {
      return ApplyResult::Reject(LedgerStatus::kBadRequest, "undecodable tally: " + dec.detail);
    }
    tally = *decoded;
  }
  return FinishReplay(event, AcceptResult(event.caller, event.tick, booth_id, status, tally, booth));
}

Election MakeElection(std::shared_ptr<const Group> group, std::string election_id,
                      std::string authority, std::vector<std::string> candidate_names,
                      uint32_t booth_count, PhaseWindows windows) {
  Election e;
  e.group = std::move(group);
  e.election_id = std::move(election_id);
  e.authority = std::move(authority);
  e.candidate_names = std::move(candidate_names);
  e.windows = windows;
  uint32_t candidates = static_cast<uint32_t>(e.candidate_names.size());
  for (uint32_t id = 1; id <= booth_count; ++id) {
    e.booths.push_back(std::make_unique<BoothContract>(e.group, e.election_id, id, e.authority,
                                                       candidates, windows));
  }
  e.main = std::make_unique<MainContract>(e.election_id, e.authority, booth_count, candidates);
  return e;
}

ApplyResult Election::Record(ApplyResult result) {
  if (result.ok() && result.event.has_value()) {
    result.event->seq = log.size();
    log.push_back(*result.event);
  }
  return result;
}

}  // namespace sbl
