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
// Deterministic election simulator.  A scenario config fixes the group,
// the voter population, per-voter behavior, and an optional list of
// injected faults; the same config always produces byte-identical
// transcripts.  Fault injection covers ledger-level attacks (rejected
// synchronously), protocol stalls (booth aborts), and post-export
// transcript tampering (caught by the auditor).

#ifndef SBL_SIM_HPP_
#define SBL_SIM_HPP_

#include "transcript.hpp"

namespace sbl {

// Known attack types.
inline constexpr const char* kAttackDoubleVote = "double-vote";
inline constexpr const char* kAttackForgedBallot = "forged-ballot";
inline constexpr const char* kAttackWrongPhase = "wrong-phase";
inline constexpr const char* kAttackBadMpcKeys = "bad-mpc-keys";
inline constexpr const char* kAttackStallRecovery = "stall-recovery";
inline constexpr const char* kAttackTamperTranscript = "tamper-transcript";

struct AttackSpec {
  std::string type;
  uint32_t booth = 0;   // 0 picks the first applicable booth
  uint32_t voter = 0;   // global voter id, 0 picks automatically
  std::string target;   // tamper variant: "ballot", "result-counts", "signin-order"
};

struct ScenarioConfig {
  std::string election_id = "election-1";
  uint32_t voters = 3;
  uint32_t candidates = 2;
  uint32_t booths = 1;
  uint64_t seed = 1;
  std::optional<unsigned> group_bits;  // absent selects the toy test group
  double signin_rate = 1.0;
  double abstain_rate = 0.0;
  std::vector<uint32_t> forced_abstainers;   // sign in, never vote
  std::vector<uint32_t> forced_non_signers;  // never sign in
  std::vector<uint32_t> fixed_votes;         // candidate per voter, 0 draws
  PhaseWindows windows;
  std::vector<AttackSpec> attacks;

  static ScenarioConfig FromJson(const Json& j);
  static ScenarioConfig FromJsonText(const std::string& text);
  Json ToJson() const;

  // Throws ConfigError (CapacityError for packings that cannot fit).
  void Validate() const;

  uint32_t BoothOf(uint32_t voter_1based) const { return (voter_1based - 1) % booths + 1; }
  unsigned CapacityBits() const;
};

ScenarioConfig DefaultConfig(uint32_t voters, uint32_t candidates, uint32_t booths, uint64_t seed);

struct BoothRunSummary {
  uint32_t booth_id = 0;
  std::string status;
  std::string abort_reason;
  uint64_t signins = 0;
  uint64_t ballots = 0;
  std::vector<uint64_t> counts;           // published, when closed
  std::vector<uint64_t> expected_counts;  // plaintext ground truth
};

struct AttackOutcome {
  std::string type;
  uint32_t booth = 0;
  uint32_t voter = 0;
  std::string expectation;  // "ledger-reject", "audit-fail", "booth-abort"
  std::string check;        // auditor check for audit-fail expectations
  std::string detail;       // what actually happened during the run
};

struct RunResult {
  std::string election_id;
  uint32_t candidates = 0;
  std::vector<BoothRunSummary> booths;
  std::vector<uint64_t> totals;
  bool partial = false;
  std::vector<uint64_t> expected_totals;
  bool totals_match = false;
  std::vector<AttackOutcome> attacks;
  std::map<std::string, double> stage_ms;
  uint64_t proofs_generated = 0;
  uint64_t proofs_verified = 0;

  Json ToJson() const;
};

struct RunOutput {
  RunResult result;
  Bytes transcript;
  std::optional<Json> expectations;  // attack expectation sidecar
};

RunOutput RunScenario(const ScenarioConfig& config);

std::string BenchCsv(const ScenarioConfig& config, const RunResult& result);

}  // namespace sbl

#endif  // SBL_SIM_HPP_
