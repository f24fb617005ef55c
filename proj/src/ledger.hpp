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
// Emulated contract ledger.  A booth contract walks the phase machine
//
//   Setup -> Registration -> SignIn -> PreVoting -> Voting
//         -> (Tally | Recovery) -> Closed, any non-terminal -> Aborted
//
// driven by a logical tick clock.  Every operation validates first and
// mutates only on acceptance; an accepted operation yields an event record
// that replays to the identical state transition.

#ifndef SBL_LEDGER_HPP_
#define SBL_LEDGER_HPP_

#include <memory>

#include "codec.hpp"

namespace sbl {

enum class Phase {
  kSetup,
  kRegistration,
  kSignIn,
  kPreVoting,
  kVoting,
  kRecovery,
  kTally,
  kClosed,
  kAborted,
};

const char* PhaseName(Phase phase);
std::optional<Phase> PhaseFromName(std::string_view name);
bool PhaseIsTerminal(Phase phase);

enum class LedgerStatus {
  kOk,
  kWrongPhase,
  kNotAuthority,
  kNotEligible,
  kDuplicateSignIn,
  kBadProof,
  kMpcMismatch,
  kEncodingMismatch,
  kNotSignedIn,
  kDoubleVote,
  kNotAVoter,
  kAbsentSetMismatch,
  kDuplicateShare,
  kTallyMismatch,
  kDeadlineNotReached,
  kIllegalTransition,
  kUnknownBooth,
  kResultMismatch,
  kAlreadyReported,
  kBadRequest,
};

const char* LedgerStatusName(LedgerStatus status);

// Booth 0 addresses the main contract.
struct Event {
  uint64_t tick = 0;
  uint64_t seq = 0;
  uint32_t booth_id = 0;
  std::string op;
  std::string caller;
  Json payload;
  std::string canonical_hex;  // hex of the canonical artifact bytes, may be empty
};

struct ApplyResult {
  LedgerStatus status = LedgerStatus::kBadRequest;
  std::string message;
  std::optional<Event> event;  // seq is assigned by the log owner

  bool ok() const { return status == LedgerStatus::kOk; }
  static ApplyResult Reject(LedgerStatus status, std::string message);
};

struct PhaseWindows {
  uint64_t voting_ticks = 10;
  uint64_t recovery_ticks = 10;
};

struct LogicalClock {
  uint64_t tick = 0;
  void Advance(uint64_t by = 1) { tick += by; }
};

class BoothContract {
 public:
  BoothContract(std::shared_ptr<const Group> group, std::string election_id, uint32_t booth_id,
                std::string authority, uint32_t candidates, PhaseWindows windows);

  // Authority operations.
  ApplyResult AdvancePhase(const std::string& caller, uint64_t tick, Phase target);
  ApplyResult RegisterVoters(const std::string& caller, uint64_t tick,
                             const std::vector<std::string>& addresses);
  ApplyResult PublishMpc(const std::string& caller, uint64_t tick,
                         const std::vector<GroupElement>& keys, const VoteEncoding& encoding);
  ApplyResult CloseVoting(const std::string& caller, uint64_t tick);
  ApplyResult Finalize(const std::string& caller, uint64_t tick, const BoothTally& claimed);
  ApplyResult Abort(const std::string& caller, uint64_t tick, const std::string& reason);

  // Voter operations; the caller must be the artifact's sender.
  ApplyResult SignIn(const std::string& caller, uint64_t tick, const GroupElement& public_key,
                     const SchnorrProof& proof);
  ApplyResult SubmitBallot(const std::string& caller, uint64_t tick, const Ballot& ballot);
  ApplyResult SubmitRecovery(const std::string& caller, uint64_t tick, const RecoveryShare& share);

  // Replays a recorded event; the regenerated event must match the record
  // byte for byte, otherwise kBadRequest is returned with a message.
  ApplyResult ApplyEvent(const Event& event);

  Phase phase() const { return phase_; }
  const Group& group() const { return *group_; }
  uint32_t booth_id() const { return booth_id_; }
  uint32_t candidates() const { return candidates_; }
  const std::string& authority() const { return authority_; }
  const std::vector<std::string>& eligible() const { return eligible_; }
  const BoothRoster& roster() const { return roster_; }
  const std::optional<std::vector<GroupElement>>& mpc_keys() const { return mpc_keys_; }
  const std::optional<VoteEncoding>& encoding() const { return encoding_; }
  const std::vector<Ballot>& ballots() const { return ballots_; }
  const std::set<uint32_t>& absent() const { return absent_; }
  const std::vector<RecoveryShare>& shares() const { return shares_; }
  const std::optional<BoothTally>& finalized() const { return finalized_; }
  const std::string& abort_reason() const { return abort_reason_; }
  uint64_t voting_deadline() const { return voting_deadline_; }
  uint64_t recovery_deadline() const { return recovery_deadline_; }
  const PhaseWindows& windows() const { return windows_; }

  bool HasVoted(const std::string& address) const;
  ProofContext ContextFor(const std::string& address, std::string_view phase_tag) const;

  // Canonical snapshot of all observable state, for no-mutation checks.
  Json SerializeState() const;

 private:
  Event MakeEvent(uint64_t tick, const char* op, const std::string& caller, Json payload,
                  const Bytes& canonical) const;

  std::shared_ptr<const Group> group_;
  std::string election_id_;
  uint32_t booth_id_ = 0;
  std::string authority_;
  uint32_t candidates_ = 0;
  PhaseWindows windows_;

  Phase phase_ = Phase::kSetup;
  std::vector<std::string> eligible_;        // registration order
  std::set<std::string> eligible_lookup_;
  BoothRoster roster_;                       // sign-in order
  std::optional<std::vector<GroupElement>> mpc_keys_;
  std::optional<VoteEncoding> encoding_;
  std::vector<Ballot> ballots_;              // submission order
  std::set<std::string> voted_;
  std::set<uint32_t> absent_;                // fixed at close when non-empty
  std::vector<RecoveryShare> shares_;        // submission order
  std::set<std::string> shared_;
  std::optional<BoothTally> finalized_;
  std::string abort_reason_;
  uint64_t voting_deadline_ = 0;
  uint64_t recovery_deadline_ = 0;
};

class MainContract {
 public:
  MainContract(std::string election_id, std::string authority, uint32_t booth_count,
               uint32_t candidates);

  // Records a booth outcome after checking the claim against the booth
  // contract's actual terminal state.
  ApplyResult AcceptResult(const std::string& caller, uint64_t tick, uint32_t booth_id,
                           const std::string& claimed_status,
                           const std::optional<BoothTally>& claimed_tally,
                           const BoothContract& booth);

  ApplyResult ApplyEvent(const Event& event, const BoothContract& booth);

  bool AllReported() const { return reported_.size() == booth_count_; }
  const std::optional<ElectionResult>& aggregate() const { return aggregate_; }
  const std::map<uint32_t, BoothOutcome>& outcomes() const { return outcomes_; }

  Json SerializeState() const;

 private:
  std::string election_id_;
  std::string authority_;
  uint32_t booth_count_ = 0;
  uint32_t candidates_ = 0;
  std::set<uint32_t> reported_;
  std::map<uint32_t, BoothOutcome> outcomes_;
  std::optional<ElectionResult> aggregate_;
};

// A full election: one main contract plus its booths, sharing a group, an
// event log, and a logical clock.
struct Election {
  std::shared_ptr<const Group> group;
  std::string election_id;
  std::string authority;
  std::vector<std::string> candidate_names;
  PhaseWindows windows;
  std::vector<std::unique_ptr<BoothContract>> booths;  // booth_id = index + 1
  std::unique_ptr<MainContract> main;
  std::vector<Event> log;
  LogicalClock clock;

  BoothContract& booth(uint32_t booth_id) { return *booths.at(booth_id - 1); }
  const BoothContract& booth(uint32_t booth_id) const { return *booths.at(booth_id - 1); }

  // Appends on acceptance, assigning the next seq; rejections pass through.
  ApplyResult Record(ApplyResult result);
};

Election MakeElection(std::shared_ptr<const Group> group, std::string election_id,
                      std::string authority, std::vector<std::string> candidate_names,
                      uint32_t booth_count, PhaseWindows windows);

}  // namespace sbl

#endif  // SBL_LEDGER_HPP_
