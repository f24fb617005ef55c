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
// Election transcripts: a self-contained JSON record of parameters, every
// accepted ledger event, and the published result.  The auditor rebuilds
// the contracts from the header and replays the event log; a transcript is
// valid only if every event re-applies cleanly and the published result
// matches the replayed state.

#ifndef SBL_TRANSCRIPT_HPP_
#define SBL_TRANSCRIPT_HPP_

#include "ledger.hpp"

namespace sbl {

inline constexpr std::string_view kTranscriptFormat = "sbl-transcript/1";

struct TranscriptHeader {
  std::string election_id;
  std::string authority;
  std::vector<std::string> candidates;
  uint32_t booth_count = 0;
  PhaseWindows windows;
  GroupParams group_params;
};

struct BoothResultRecord {
  uint32_t booth_id = 0;
  std::string status;  // "closed" or "aborted"
  std::optional<BoothTally> tally;
  std::string reason;
};

struct TranscriptResult {
  std::vector<BoothResultRecord> booths;
  std::vector<uint64_t> totals;
  std::vector<uint32_t> counted;
  std::vector<uint32_t> aborted;
  bool partial = false;
};

struct ElectionTranscript {
  TranscriptHeader header;
  std::shared_ptr<const Group> group;
  std::vector<Event> events;
  TranscriptResult result;
};

// Serializes a finished election.  Throws Error if any booth is still
// running or the main contract has not aggregated.
Bytes ExportTranscript(const Election& election);

enum class ImportError { kNone, kMalformedJson, kBadVersion, kNonMemberElement, kTruncated };
const char* ImportErrorName(ImportError error);

struct ImportOutcome {
  std::optional<ElectionTranscript> transcript;
  ImportError error = ImportError::kNone;
  std::string message;

  bool ok() const { return error == ImportError::kNone; }
};

/// Strict parse: version pin, group re-validation, event ordering, and
// membership checks on every element in every payload.
ImportOutcome ImportTranscript(const Bytes& data);

struct CheckOutcome {
  bool pass = true;
  std::string detail;
};

struct FirstFailure {
  uint64_t event_index = 0;  // one past the log for post-replay checks
  std::string check;
  std::string detail;
};

struct AuditStats {
  uint64_t events = 0;
  uint64_t signins = 0;
  uint64_t ballots = 0;
  uint64_t shares = 0;
  uint32_t booths_closed = 0;
  uint32_t booths_aborted = 0;
};

inline constexpr const char* kCheckPhaseLegality = "phase_legality";
inline constexpr const char* kCheckSignInProofs = "signin_proofs";
inline constexpr const char* kCheckMpcRecomputation = "mpc_recomputation";
inline constexpr const char* kCheckBallotProofs = "ballot_proofs";
inline constexpr const char* kCheckRecoveryProofs = "recovery_proofs";
inline constexpr const char* kCheckTallyEquations = "tally_equations";
inline constexpr const char* kCheckAggregation = "aggregation";

struct AuditReport {
  bool valid = false;
  std::map<std::string, CheckOutcome> checks;
  std::optional<FirstFailure> first_failure;
  AuditStats stats;

  Json ToJson() const;
  std::string Summary() const;
};

AuditReport AuditTranscript(const ElectionTranscript& transcript);

}  // namespace sbl

#endif  // SBL_TRANSCRIPT_HPP_
