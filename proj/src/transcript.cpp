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

#include "transcript.hpp"

#include <sstream>

#include "hashing.hpp"

namespace sbl {

namespace {

std::string MpzHexLower(const mpz_class& v) {
  std::string hex = v.get_str(16);
  if (hex.size() % 2 != 0) hex.insert(hex.begin(), '0');
  return hex;
}

// Commits to every header field as serialized, so no header byte can change
// without invalidating the transcript at import.
std::string HeaderDigestHex(const std::string& election_id, const std::string& authority,
                            const std::vector<std::string>& candidates, uint32_t booth_count,
                            const PhaseWindows& windows, const std::string& p_hex,
                            const std::string& q_hex, const std::string& g_hex,
                            const std::string& label) {
  std::vector<Bytes> items;
  auto push = [&items](const std::string& s) { items.emplace_back(s.begin(), s.end()); };
  push(election_id);
  push(authority);
  Bytes shape;
  AppendU32(shape, booth_count);
  AppendU32(shape, static_cast<uint32_t>(candidates.size()));
  AppendU64(shape, windows.voting_ticks);
  AppendU64(shape, windows.recovery_ticks);
  items.push_back(shape);
  push(p_hex);
  push(q_hex);
  push(g_hex);
  push(label);
  for (const std::string& name : candidates) push(name);
  const Digest digest = HashByteList("sbl/transcript-header/v1", items);
  return HexEncode(digest.data(), digest.size());
}

Json EventJson(const Event& e) {
  return Json{{"tick", e.tick},     {"seq", e.seq},         {"booth", e.booth_id},
              {"op", e.op},         {"caller", e.caller},   {"payload", e.payload},
              {"canonical", e.canonical_hex}};
}

}  // namespace

const char* ImportErrorName(ImportError error) {
  switch (error) {
    case ImportError::kNone: return "none";
    case ImportError::kMalformedJson: return "malformed-json";
    case ImportError::kBadVersion: return "bad-version";
    case ImportError::kNonMemberElement: return "non-member-element";
    case ImportError::kTruncated: return "truncated";
  }
  return "unknown";
}

Bytes ExportTranscript(const Election& election) {
  for (const auto& booth : election.booths) {
    if (!PhaseIsTerminal(booth->phase())) {
      throw Error("booth " + std::to_string(booth->booth_id()) + " has not terminated");
    }
  }
  if (!election.main->aggregate().has_value()) {
    throw Error("main contract has not aggregated");
  }
  const Group& group = *election.group;

  const std::string p_hex = MpzHexLower(group.p());
  const std::string q_hex = MpzHexLower(group.q());
  const std::string g_hex = MpzHexLower(group.generator().value);
  const std::string label(SecurityLabelName(group.label()));
  Json header{{"election_id", election.election_id},
              {"authority", election.authority},
              {"candidates", election.candidate_names},
              {"booths", static_cast<uint32_t>(election.booths.size())},
              {"windows",
               Json{{"voting", election.windows.voting_ticks},
                    {"recovery", election.windows.recovery_ticks}}},
              {"group", Json{{"p", p_hex}, {"q", q_hex}, {"g", g_hex}, {"label", label}}},
              {"digest",
               HeaderDigestHex(election.election_id, election.authority, election.candidate_names,
                               static_cast<uint32_t>(election.booths.size()), election.windows,
                               p_hex, q_hex, g_hex, label)}};

  Json events = Json::array();
  for (const Event& e : election.log) events.push_back(EventJson(e));

  const ElectionResult& agg = *election.main->aggregate();
  Json booth_records = Json::array();
  for (const auto& booth : election.booths) {
    Json record{{"booth", booth->booth_id()}};
    if (booth->phase() == Phase::kClosed) {
      record["status"] = "closed";
      record["tally"] = BoothTallyJson(group, *booth->finalized());
    } else {
      record["status"] = "aborted";
      record["reason"] = booth->abort_reason();
    }
    booth_records.push_back(std::move(record));
  }
  Json result{{"booths", booth_records},
              {"totals", agg.totals},
              {"counted", agg.counted_booths},
              {"aborted", agg.aborted_booths},
              {"partial", agg.partial}};

  Json root{{"format", std::string(kTranscriptFormat)},
            {"header", header},
            {"events", events},
            {"result", result}};
  std::string text = DumpJson(root);
  return Bytes(text.begin(), text.end());
}

namespace {

struct ImportCursor {
  ImportError error = ImportError::kNone;
  std::string message;

  bool Fail(ImportError e, std::string msg) {
    if (error == ImportError::kNone) {
      error = e;
      message = std::move(msg);
    }
    return false;
  }
};

bool ParseMpzHex(const Json& j, const char* field, mpz_class* out) {
  if (!j.contains(field) || !j[field].is_string()) return false;
  Bytes bytes;
  std::string hex = j[field].get<std::string>();
  if (hex.empty() || !HexDecode(hex, &bytes)) return false;
  *out = MpzFromBytes(bytes);
  return true;
}

// Structural and membership validation of one event payload, mirroring
// what the replay will decode.  Returns false with the cursor set.
bool ValidatePayload(ImportCursor& cur, const Group& group, const Event& event) {
  Decoder dec{group};
  auto finish = [&](bool decoded) {
    if (decoded && !dec.Failed()) return true;
    if (dec.fail == DecodeFail::kNonMember) {
      return cur.Fail(ImportError::kNonMemberElement,
                      "event " + std::to_string(event.seq) + ": " + dec.detail);
    }
    return cur.Fail(ImportError::kMalformedJson,
                    "event " + std::to_string(event.seq) + ": " +
                        (dec.detail.empty() ? "bad payload" : dec.detail));
  };
  const Json& p = event.payload;

  if (event.op == "advance") {
    auto name = dec.StringField(p, "target");
    return finish(name.has_value() && PhaseFromName(*name).has_value());
  }
  if (event.op == "register") {
    if (!p.is_object() || !p.contains("addresses") || !p["addresses"].is_array()) {
      return finish(false);
    }
    for (const Json& a : p["addresses"]) {
      if (!a.is_string()) return finish(false);
    }
    return finish(true);
  }
  if (event.op == "sign_in") {
    auto x = dec.Element(p, "x");
    bool ok = x.has_value() && p.contains("proof") &&
              SchnorrProofFromJson(dec, p["proof"]).has_value();
    return finish(ok);
  }
  if (event.op == "publish_mpc") {
    if (!p.is_object() || !p.contains("keys") || !p["keys"].is_array() || !p.contains("encoding")) {
      return finish(false);
    }
    for (const Json& kj : p["keys"]) {
      if (!kj.is_string()) return finish(false);
      Bytes bytes;
      if (!HexDecode(kj.get<std::string>(), &bytes)) return finish(false);
      if (!group.DecodeElement(bytes).has_value()) {
        dec.NonMember("mpc key");
        return finish(false);
      }
    }
    return finish(VoteEncodingFromJson(dec, p["encoding"]).has_value());
  }
  if (event.op == "ballot") {
    return finish(BallotFromJson(dec, p).has_value());
  }
  if (event.op == "close_voting") {
    auto outcome = dec.StringField(p, "outcome");
    if (!outcome.has_value() || !p.contains("absent") || !p["absent"].is_array()) {
      return finish(false);
    }
    for (const Json& a : p["absent"]) {
      if (!a.is_number_unsigned()) return finish(false);
    }
    return finish(true);
  }
  if (event.op == "recovery") {
    return finish(RecoveryShareFromJson(dec, p).has_value());
  }
  if (event.op == "finalize") {
    auto outcome = dec.StringField(p, "outcome");
    if (!outcome.has_value()) return finish(false);
    if (*outcome == "closed") {
      return finish(p.contains("tally") && BoothTallyFromJson(dec, p["tally"]).has_value());
    }
    if (*outcome == "aborted") {
      return finish(dec.StringField(p, "reason").has_value());
    }
    return finish(false);
  }
  if (event.op == "abort") {
    return finish(dec.StringField(p, "reason").has_value());
  }
  if (event.op == "accept_result") {
    auto booth = dec.U64Field(p, "booth");
    auto status = dec.StringField(p, "status");
    bool ok = booth.has_value() && status.has_value();
    if (ok && p.contains("tally")) ok = BoothTallyFromJson(dec, p["tally"]).has_value();
    return finish(ok);
  }
  return cur.Fail(ImportError::kMalformedJson,
                  "event " + std::to_string(event.seq) + ": unknown op " + event.op);
}

}  // namespace

ImportOutcome ImportTranscript(const Bytes& data) {
  ImportOutcome out;
  ImportCursor cur;
  auto fail = [&](ImportError e, std::string msg) {
    out.error = e;
    out.message = std::move(msg);
    return out;
  };

  Json root;
  try {
    root = Json::parse(data.begin(), data.end());
  } catch (const Json::parse_error& e) {
    // Errors at or past the end of input mean the document was cut short.
    if (e.byte >= data.size()) {
      return fail(ImportError::kTruncated, e.what());
    }
    return fail(ImportError::kMalformedJson, e.what());
  }
  if (!root.is_object()) return fail(ImportError::kMalformedJson, "root is not an object");

  if (!root.contains("format") || !root["format"].is_string()) {
    return fail(ImportError::kBadVersion, "missing format marker");
  }
  if (root["format"].get<std::string>() != kTranscriptFormat) {
    return fail(ImportError::kBadVersion,
                "unsupported format " + root["format"].get<std::string>());
  }

  if (!root.contains("header") || !root["header"].is_object() || !root.contains("events") ||
      !root["events"].is_array() || !root.contains("result") || !root["result"].is_object()) {
    return fail(ImportError::kMalformedJson, "missing header, events, or result");
  }
  const Json& hj = root["header"];

  ElectionTranscript transcript;
  TranscriptHeader& header = transcript.header;
  if (!hj.contains("election_id") || !hj["election_id"].is_string() ||
      !hj.contains("authority") || !hj["authority"].is_string() || !hj.contains("candidates") ||
      !hj["candidates"].is_array() || !hj.contains("booths") ||
      !hj["booths"].is_number_unsigned() || !hj.contains("group") || !hj["group"].is_object() ||
      !hj.contains("windows") || !hj["windows"].is_object()) {
    return fail(ImportError::kMalformedJson, "incomplete header");
  }
  header.election_id = hj["election_id"].get<std::string>();
  header.authority = hj["authority"].get<std::string>();
  for (const Json& c : hj["candidates"]) {
    if (!c.is_string()) return fail(ImportError::kMalformedJson, "bad candidate name");
    header.candidates.push_back(c.get<std::string>());
  }
  if (header.candidates.empty()) return fail(ImportError::kMalformedJson, "no candidates");
  header.booth_count = hj["booths"].get<uint32_t>();
  if (header.booth_count == 0) return fail(ImportError::kMalformedJson, "no booths");

  const Json& wj = hj["windows"];
  if (!wj.contains("voting") || !wj["voting"].is_number_unsigned() || !wj.contains("recovery") ||
      !wj["recovery"].is_number_unsigned()) {
    return fail(ImportError::kMalformedJson, "incomplete windows");
  }
  header.windows.voting_ticks = wj["voting"].get<uint64_t>();
  header.windows.recovery_ticks = wj["recovery"].get<uint64_t>();

  const Json& gj = hj["group"];
  GroupParams params;
  if (!ParseMpzHex(gj, "p", &params.p) || !ParseMpzHex(gj, "q", &params.q) ||
      !ParseMpzHex(gj, "g", &params.g) || !gj.contains("label") || !gj["label"].is_string()) {
    return fail(ImportError::kMalformedJson, "incomplete group parameters");
  }
  params.label = gj["label"].get<std::string>() == "production" ? SecurityLabel::kProduction
                                                                : SecurityLabel::kTest;
  std::string group_error;
  auto group = Group::FromParams(params, &group_error);
  if (!group.has_value()) {
    return fail(ImportError::kMalformedJson, "invalid group: " + group_error);
  }
  header.group_params = params;
  transcript.group = std::make_shared<Group>(*group);

  if (!hj.contains("digest") || !hj["digest"].is_string()) {
    return fail(ImportError::kMalformedJson, "missing header digest");
  }
  const std::string expected_digest = HeaderDigestHex(
      header.election_id, header.authority, header.candidates, header.booth_count, header.windows,
      gj["p"].get<std::string>(), gj["q"].get<std::string>(), gj["g"].get<std::string>(),
      gj["label"].get<std::string>());
  if (hj["digest"].get<std::string>() != expected_digest) {
    return fail(ImportError::kMalformedJson, "header digest mismatch");
  }

  uint64_t last_tick = 0;
  uint64_t index = 0;
  for (const Json& ej : root["events"]) {
    if (!ej.is_object() || !ej.contains("tick") || !ej["tick"].is_number_unsigned() ||
        !ej.contains("seq") || !ej["seq"].is_number_unsigned() || !ej.contains("booth") ||
        !ej["booth"].is_number_unsigned() || !ej.contains("op") || !ej["op"].is_string() ||
        !ej.contains("caller") || !ej["caller"].is_string() || !ej.contains("payload") ||
        !ej.contains("canonical") || !ej["canonical"].is_string()) {
      return fail(ImportError::kMalformedJson, "incomplete event at index " + std::to_string(index));
    }
    Event e;
    e.tick = ej["tick"].get<uint64_t>();
    e.seq = ej["seq"].get<uint64_t>();
    e.booth_id = ej["booth"].get<uint32_t>();
    e.op = ej["op"].get<std::string>();
    e.caller = ej["caller"].get<std::string>();
    e.payload = ej["payload"];
    e.canonical_hex = ej["canonical"].get<std::string>();

    if (e.seq != index) {
      return fail(ImportError::kMalformedJson, "event seq gap at index " + std::to_string(index));
    }
    if (e.tick < last_tick) {
      return fail(ImportError::kMalformedJson, "event ticks go backwards at seq " + std::to_string(index));
    }
    if (e.booth_id > header.booth_count) {
      return fail(ImportError::kMalformedJson, "event booth out of range at seq " + std::to_string(index));
    }
    Bytes canonical_bytes;
    if (!HexDecode(e.canonical_hex, &canonical_bytes)) {
      return fail(ImportError::kMalformedJson, "bad canonical hex at seq " + std::to_string(index));
    }
    if (!ValidatePayload(cur, *transcript.group, e)) {
      return fail(cur.error, cur.message);
    }
    last_tick = e.tick;
    ++index;
    transcript.events.push_back(std::move(e));
  }

  const Json& rj = root["result"];
  if (!rj.contains("booths") || !rj["booths"].is_array() || !rj.contains("totals") ||
      !rj["totals"].is_array() || !rj.contains("partial") || !rj["partial"].is_boolean() ||
      !rj.contains("counted") || !rj["counted"].is_array() || !rj.contains("aborted") ||
      !rj["aborted"].is_array()) {
    return fail(ImportError::kMalformedJson, "incomplete result block");
  }
  for (const Json& bj : rj["booths"]) {
    if (!bj.is_object() || !bj.contains("booth") || !bj["booth"].is_number_unsigned() ||
        !bj.contains("status") || !bj["status"].is_string()) {
      return fail(ImportError::kMalformedJson, "incomplete booth record");
    }
    BoothResultRecord record;
    record.booth_id = bj["booth"].get<uint32_t>();
    record.status = bj["status"].get<std::string>();
    if (record.status == "closed") {
      if (!bj.contains("tally")) return fail(ImportError::kMalformedJson, "closed booth without tally");
      Decoder dec{*transcript.group};
      auto tally = BoothTallyFromJson(dec, bj["tally"]);
      if (!tally.has_value()) {
        if (dec.fail == DecodeFail::kNonMember) {
          return fail(ImportError::kNonMemberElement, "result tally: " + dec.detail);
        }
        return fail(ImportError::kMalformedJson, "result tally: " + dec.detail);
      }
      record.tally = *tally;
    } else if (record.status == "aborted") {
      if (bj.contains("reason") && bj["reason"].is_string()) {
        record.reason = bj["reason"].get<std::string>();
      }
    } else {
      return fail(ImportError::kMalformedJson, "unknown booth status " + record.status);
    }
    transcript.result.booths.push_back(std::move(record));
  }
  for (const Json& t : rj["totals"]) {
    if (!t.is_number_unsigned()) return fail(ImportError::kMalformedJson, "bad totals entry");
    transcript.result.totals.push_back(t.get<uint64_t>());
  }
  for (const Json& c : rj["counted"]) {
    if (!c.is_number_unsigned()) return fail(ImportError::kMalformedJson, "bad counted entry");
    transcript.result.counted.push_back(c.get<uint32_t>());
  }
  for (const Json& a : rj["aborted"]) {
    if (!a.is_number_unsigned()) return fail(ImportError::kMalformedJson, "bad aborted entry");
    transcript.result.aborted.push_back(a.get<uint32_t>());
  }
  transcript.result.partial = rj["partial"].get<bool>();

  out.transcript = std::move(transcript);
  return out;
}

namespace {

// Which audit check a rejected replay op counts against.
const char* CheckForRejection(const Event& event, LedgerStatus status) {
  switch (status) {
    case LedgerStatus::kBadProof:
      if (event.op == "sign_in") return kCheckSignInProofs;
      if (event.op == "ballot") return kCheckBallotProofs;
      if (event.op == "recovery") return kCheckRecoveryProofs;
      break;
    case LedgerStatus::kMpcMismatch:
    case LedgerStatus::kEncodingMismatch:
      return kCheckMpcRecomputation;
    case LedgerStatus::kTallyMismatch:
      return kCheckTallyEquations;
    case LedgerStatus::kResultMismatch:
    case LedgerStatus::kAlreadyReported:
      return kCheckAggregation;
    case LedgerStatus::kBadRequest:
      if (event.op == "sign_in") return kCheckSignInProofs;
      if (event.op == "publish_mpc") return kCheckMpcRecomputation;
      if (event.op == "ballot") return kCheckBallotProofs;
      if (event.op == "recovery") return kCheckRecoveryProofs;
      if (event.op == "finalize") return kCheckTallyEquations;
      if (event.op == "accept_result") return kCheckAggregation;
      break;
    default:
      break;
  }
  return kCheckPhaseLegality;
}

}  // namespace

Json AuditReport::ToJson() const {
  Json checks_json = Json::object();
  for (const auto& [name, outcome] : checks) {
    Json entry{{"pass", outcome.pass}};
    if (!outcome.detail.empty()) entry["detail"] = outcome.detail;
    checks_json[name] = entry;
  }
  Json j{{"valid", valid},
         {"checks", checks_json},
         {"stats",
          Json{{"events", stats.events},
               {"signins", stats.signins},
               {"ballots", stats.ballots},
               {"shares", stats.shares},
               {"booths_closed", stats.booths_closed},
               {"booths_aborted", stats.booths_aborted}}}};
  if (first_failure.has_value()) {
    j["first_failure"] = Json{{"event_index", first_failure->event_index},
                              {"check", first_failure->check},
                              {"detail", first_failure->detail}};
  }
  return j;
}

std::string AuditReport::Summary() const {
  std::ostringstream os;
  os << (valid ? "VALID" : "INVALID") << " transcript: " << stats.events << " events, "
     << stats.ballots << " ballots, " << stats.booths_closed << " booths closed, "
     << stats.booths_aborted << " aborted";
  if (first_failure.has_value()) {
    os << "; first failure at event " << first_failure->event_index << " ["
       << first_failure->check << "]: " << first_failure->detail;
  }
  return os.str();
}

AuditReport AuditTranscript(const ElectionTranscript& transcript) {
  AuditReport report;
  for (const char* name : {kCheckPhaseLegality, kCheckSignInProofs, kCheckMpcRecomputation,
                           kCheckBallotProofs, kCheckRecoveryProofs, kCheckTallyEquations,
                           kCheckAggregation}) {
    report.checks[name] = CheckOutcome{};
  }
  report.stats.events = transcript.events.size();

  auto fail = [&](uint64_t index, const char* check, const std::string& detail) {
    report.checks[check] = CheckOutcome{false, detail};
    if (!report.first_failure.has_value()) {
      report.first_failure = FirstFailure{index, check, detail};
    }
  };

  Election replay = MakeElection(transcript.group, transcript.header.election_id,
                                 transcript.header.authority, transcript.header.candidates,
                                 transcript.header.booth_count, transcript.header.windows);

  for (uint64_t i = 0; i < transcript.events.size(); ++i) {
    const Event& event = transcript.events[i];
    ApplyResult result;
    if (event.booth_id == 0) {
      if (!event.payload.is_object() || !event.payload.contains("booth") ||
          !event.payload["booth"].is_number_unsigned()) {
        fail(i, kCheckAggregation, "main event without booth reference");
        break;
      }
      uint32_t target = event.payload["booth"].get<uint32_t>();
      if (target == 0 || target > replay.booths.size()) {
        fail(i, kCheckAggregation, "main event references unknown booth");
        break;
      }
      result = replay.main->ApplyEvent(event, replay.booth(target));
    } else {
      result = replay.booth(event.booth_id).ApplyEvent(event);
    }
    if (!result.ok()) {
      fail(i, CheckForRejection(event, result.status),
           std::string(LedgerStatusName(result.status)) + ": " + result.message);
      break;
    }
    if (event.op == "sign_in") ++report.stats.signins;
    if (event.op == "ballot") ++report.stats.ballots;
    if (event.op == "recovery") ++report.stats.shares;
  }

  const uint64_t end_index = transcript.events.size();
  if (!report.first_failure.has_value()) {
    // Replay finished; the contracts must all be terminal and aggregated.
    for (const auto& booth : replay.booths) {
      if (!PhaseIsTerminal(booth->phase())) {
        fail(end_index, kCheckPhaseLegality,
             "booth " + std::to_string(booth->booth_id()) + " never terminated");
      }
    }
  }
  if (!report.first_failure.has_value() && !replay.main->aggregate().has_value()) {
    fail(end_index, kCheckAggregation, "main contract never aggregated");
  }

  if (!report.first_failure.has_value()) {
    // The published result block must agree with the replayed state.
    const Group& group = *transcript.group;
    std::set<uint32_t> seen;
    for (const BoothResultRecord& record : transcript.result.booths) {
      if (record.booth_id == 0 || record.booth_id > replay.booths.size() ||
          !seen.insert(record.booth_id).second) {
        fail(end_index, kCheckAggregation, "result block has bad booth ids");
        break;
      }
      const BoothContract& booth = replay.booth(record.booth_id);
      std::string actual = PhaseName(booth.phase());
      if (record.status != actual) {
        fail(end_index, kCheckTallyEquations,
             "booth " + std::to_string(record.booth_id) + " status " + record.status +
                 " but replay says " + actual);
        break;
      }
      if (booth.phase() == Phase::kClosed) {
        if (!record.tally.has_value() || !(*record.tally == *booth.finalized())) {
          fail(end_index, kCheckTallyEquations,
               "booth " + std::to_string(record.booth_id) + " tally diverges from replay");
          break;
        }
        // Independent re-check of the published equations.
        const BoothTally& tally = *record.tally;
        if (!(group.ExpPublic(group.generator(), tally.packed) == tally.tally)) {
          fail(end_index, kCheckTallyEquations,
               "booth " + std::to_string(record.booth_id) + " tally does not open");
          break;
        }
      } else if (record.reason != booth.abort_reason()) {
        fail(end_index, kCheckTallyEquations,
             "booth " + std::to_string(record.booth_id) + " abort reason diverges from replay");
        break;
      }
    }
    if (!report.first_failure.has_value() && seen.size() != replay.booths.size()) {
      fail(end_index, kCheckAggregation, "result block misses booths");
    }
  }

  if (!report.first_failure.has_value()) {
    const ElectionResult& agg = *replay.main->aggregate();
    if (transcript.result.totals != agg.totals || transcript.result.partial != agg.partial ||
        transcript.result.counted != agg.counted_booths ||
        transcript.result.aborted != agg.aborted_booths) {
      fail(end_index, kCheckAggregation, "published aggregate diverges from replay");
    }
  }

  // Stats reflect replayed state even when a later check failed.
  for (const auto& booth : replay.booths) {
    if (booth->phase() == Phase::kClosed) ++report.stats.booths_closed;
    if (booth->phase() == Phase::kAborted) ++report.stats.booths_aborted;
  }

  report.valid = !report.first_failure.has_value();
  return report;
}

}  // namespace sbl
