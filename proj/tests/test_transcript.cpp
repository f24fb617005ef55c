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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "sim.hpp"
#include "transcript.hpp"

using namespace sbl;

namespace {

// One cached honest run shared by the read-only cases.
const RunOutput& HonestRun() {
  static RunOutput output = [] {
    ScenarioConfig config = DefaultConfig(5, 2, 2, 11);
    config.forced_abstainers = {4};
    return RunScenario(config);
  }();
  return output;
}

Json ParseTranscript(const Bytes& data) { return Json::parse(data.begin(), data.end()); }

Bytes ToBytes(const Json& j) {
  std::string text = j.dump();
  return Bytes(text.begin(), text.end());
}

ImportOutcome ImportJson(const Json& j) { return ImportTranscript(ToBytes(j)); }

}  // namespace

TEST_CASE("export, import, audit round-trip on an honest run") {
  const RunOutput& run = HonestRun();
  ImportOutcome imported = ImportTranscript(run.transcript);
  REQUIRE_MESSAGE(imported.ok(), imported.message);
  const ElectionTranscript& t = *imported.transcript;
  CHECK(t.header.election_id == "election-11");
  CHECK(t.header.booth_count == 2);
  CHECK(t.header.candidates == std::vector<std::string>{"candidate-1", "candidate-2"});
  CHECK_FALSE(t.events.empty());

  AuditReport report = AuditTranscript(t);
  CHECK_MESSAGE(report.valid, report.Summary());
  for (const auto& [name, outcome] : report.checks) {
    CHECK_MESSAGE(outcome.pass, name);
  }
  CHECK(report.stats.events == t.events.size());
  CHECK(report.stats.ballots == 4);
  CHECK_FALSE(report.first_failure.has_value());
  // The summary names the verdict.
  CHECK(report.Summary().substr(0, 5) == "VALID");
  // Report JSON carries every check.
  Json rj = report.ToJson();
  CHECK(rj["valid"] == true);
  CHECK(rj["checks"].size() == 7);
}

TEST_CASE("import rejects the wrong format version") {
  Json j = ParseTranscript(HonestRun().transcript);
  j["format"] = "sbl-transcript/2";
  ImportOutcome out = ImportJson(j);
  CHECK_FALSE(out.ok());
  CHECK(out.error == ImportError::kBadVersion);
  j.erase("format");
  CHECK(ImportJson(j).error == ImportError::kBadVersion);
}

TEST_CASE("import rejects malformed json and truncation distinctly") {
  const Bytes& good = HonestRun().transcript;
  Bytes truncated(good.begin(), good.begin() + good.size() / 2);
  ImportOutcome out = ImportTranscript(truncated);
  CHECK_FALSE(out.ok());
  CHECK(out.error == ImportError::kTruncated);

  Bytes garbage = {'n', 'o', 't', ' ', 'j', 's', 'o', 'n', '!'};
  out = ImportTranscript(garbage);
  CHECK_FALSE(out.ok());
  CHECK(out.error == ImportError::kMalformedJson);

  CHECK(ImportTranscript(Bytes{}).error == ImportError::kTruncated);
}

TEST_CASE("import rejects structural damage") {
  const Json base = ParseTranscript(HonestRun().transcript);

  SUBCASE("missing header field") {
    Json j = base;
    j["header"].erase("authority");
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("invalid group parameters") {
    Json j = base;
    j["header"]["group"]["p"] = "19";  // p != 2q+1 for the embedded q
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("sequence gap") {
    Json j = base;
    j["events"][3]["seq"] = 99;
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("tick regression") {
    Json j = base;
    size_t last = j["events"].size() - 1;
    j["events"][last]["tick"] = 0;
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("unknown booth id") {
    Json j = base;
    j["events"][0]["booth"] = 9;
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("unknown op") {
    Json j = base;
    j["events"][0]["op"] = "mint";
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("broken canonical hex") {
    Json j = base;
    j["events"][0]["canonical"] = "zz";
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("missing result block") {
    Json j = base;
    j.erase("result");
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
  SUBCASE("closed booth without a tally record") {
    Json j = base;
    for (Json& record : j["result"]["booths"]) {
      if (record["status"] == "closed") {
        record.erase("tally");
        break;
      }
    }
    CHECK(ImportJson(j).error == ImportError::kMalformedJson);
  }
}

TEST_CASE("import rejects non-member elements wherever they hide") {
  const Json base = ParseTranscript(HonestRun().transcript);
  // 05 is a non-residue mod 23; 00 is out of range.
  SUBCASE("sign-in key") {
    Json j = base;
    for (Json& event : j["events"]) {
      if (event["op"] == "sign_in") {
        event["payload"]["x"] = "05";
        break;
      }
    }
    CHECK(ImportJson(j).error == ImportError::kNonMemberElement);
  }
  SUBCASE("ballot value") {
    Json j = base;
    for (Json& event : j["events"]) {
      if (event["op"] == "ballot") {
        event["payload"]["b"] = "00";
        break;
      }
    }
    CHECK(ImportJson(j).error == ImportError::kNonMemberElement);
  }
  SUBCASE("mpc key") {
    Json j = base;
    for (Json& event : j["events"]) {
      if (event["op"] == "publish_mpc") {
        event["payload"]["keys"][0] = "05";
        break;
      }
    }
    CHECK(ImportJson(j).error == ImportError::kNonMemberElement);
  }
  SUBCASE("result tally element") {
    Json j = base;
    for (Json& record : j["result"]["booths"]) {
      if (record["status"] == "closed") {
        record["tally"]["t"] = "05";
        break;
      }
    }
    CHECK(ImportJson(j).error == ImportError::kNonMemberElement);
  }
}

TEST_CASE("audit fails closed on replay divergence") {
  const Json base = ParseTranscript(HonestRun().transcript);

  SUBCASE("tampered ballot value") {
    Json j = base;
    for (Json& event : j["events"]) {
      if (event["op"] == "ballot") {
        // 2 -> 8 keeps membership (8 = 2^3) but breaks the proof.
        event["payload"]["b"] = event["payload"]["b"] == "02" ? "08" : "02";
        break;
      }
    }
    ImportOutcome out = ImportJson(j);
    REQUIRE(out.ok());
    AuditReport report = AuditTranscript(*out.transcript);
    CHECK_FALSE(report.valid);
    REQUIRE(report.first_failure.has_value());
    CHECK(report.first_failure->check == kCheckBallotProofs);
  }
  SUBCASE("swapped sign-in events break mpc recomputation") {
    Json j = base;
    std::vector<size_t> signins;
    for (size_t i = 0; i < j["events"].size(); ++i) {
      if (j["events"][i]["op"] == "sign_in" && j["events"][i]["booth"] == 1) signins.push_back(i);
    }
    REQUIRE(signins.size() >= 2);
    Json a = j["events"][signins[0]];
    Json b = j["events"][signins[1]];
    std::swap(a["payload"], b["payload"]);
    std::swap(a["caller"], b["caller"]);
    std::swap(a["canonical"], b["canonical"]);
    j["events"][signins[0]] = a;
    j["events"][signins[1]] = b;
    ImportOutcome out = ImportJson(j);
    REQUIRE(out.ok());
    AuditReport report = AuditTranscript(*out.transcript);
    CHECK_FALSE(report.valid);
    REQUIRE(report.first_failure.has_value());
    CHECK(report.first_failure->check == kCheckMpcRecomputation);
  }
  SUBCASE("result counts shifted") {
    Json j = base;
    bool shifted = false;
    for (Json& record : j["result"]["booths"]) {
      if (record["status"] != "closed") continue;
      Json& counts = record["tally"]["counts"];
      for (size_t i = 0; i < counts.size() && !shifted; ++i) {
        if (counts[i].get<uint64_t>() == 0) continue;
        size_t other = (i + 1) % counts.size();
        counts[i] = counts[i].get<uint64_t>() - 1;
        counts[other] = counts[other].get<uint64_t>() + 1;
        shifted = true;
      }
      if (shifted) break;
    }
    REQUIRE(shifted);
    ImportOutcome out = ImportJson(j);
    REQUIRE(out.ok());
    AuditReport report = AuditTranscript(*out.transcript);
    CHECK_FALSE(report.valid);
    REQUIRE(report.first_failure.has_value());
    CHECK(report.first_failure->check == kCheckTallyEquations);
  }
  SUBCASE("published totals inflated") {
    Json j = base;
    j["result"]["totals"][0] = j["result"]["totals"][0].get<uint64_t>() + 1;
    ImportOutcome out = ImportJson(j);
    REQUIRE(out.ok());
    AuditReport report = AuditTranscript(*out.transcript);
    CHECK_FALSE(report.valid);
    REQUIRE(report.first_failure.has_value());
    CHECK(report.first_failure->check == kCheckAggregation);
  }
  SUBCASE("dropped recovery share aborts the replayed booth") {
    Json j = base;
    // Removing one recovery event desynchronizes the finalize that follows.
    Json pruned = Json::array();
    bool dropped = false;
    for (Json& event : j["events"]) {
      if (!dropped && event["op"] == "recovery") {
        dropped = true;
        continue;
      }
      event["seq"] = pruned.size();
      pruned.push_back(event);
    }
    REQUIRE(dropped);
    j["events"] = pruned;
    ImportOutcome out = ImportJson(j);
    REQUIRE(out.ok());
    AuditReport report = AuditTranscript(*out.transcript);
    CHECK_FALSE(report.valid);
  }
  SUBCASE("forged extra ballot is rejected in replay") {
    Json j = base;
    // Duplicate an existing ballot event under the other voter's name: the
    // proof is bound to the original sender, so replay rejects it.
    Json events = j["events"];
    size_t ballot_at = 0;
    for (size_t i = 0; i < events.size(); ++i) {
      if (events[i]["op"] == "ballot") ballot_at = i;
    }
    Json dup = events[ballot_at];
    // Find a different signer in the same booth to impersonate.
    for (const Json& event : events) {
      if (event["op"] == "sign_in" && event["booth"] == dup["booth"] &&
          event["caller"] != dup["caller"]) {
        dup["caller"] = event["caller"];
        dup["payload"]["address"] = event["caller"];
        break;
      }
    }
    Json rebuilt = Json::array();
    for (size_t i = 0; i < events.size(); ++i) {
      rebuilt.push_back(events[i]);
      if (i == ballot_at) {
        dup["seq"] = 0;  // reassigned below
        rebuilt.push_back(dup);
      }
    }
    for (size_t i = 0; i < rebuilt.size(); ++i) rebuilt[i]["seq"] = i;
    j["events"] = rebuilt;
    ImportOutcome out = ImportJson(j);
    REQUIRE(out.ok());
    AuditReport report = AuditTranscript(*out.transcript);
    CHECK_FALSE(report.valid);
  }
}

TEST_CASE("audit requires terminal booths and a complete result") {
  const Json base = ParseTranscript(HonestRun().transcript);
  // Cut the log before finalization: booths end non-terminal.
  Json j = base;
  Json pruned = Json::array();
  for (const Json& event : j["events"]) {
    if (event["op"] == "finalize" || event["op"] == "accept_result") continue;
    Json copy = event;
    copy["seq"] = pruned.size();
    pruned.push_back(copy);
  }
  j["events"] = pruned;
  ImportOutcome out = ImportJson(j);
  REQUIRE(out.ok());
  AuditReport report = AuditTranscript(*out.transcript);
  CHECK_FALSE(report.valid);
  REQUIRE(report.first_failure.has_value());
  CHECK(report.first_failure->check == kCheckPhaseLegality);
}

TEST_CASE("transcripts are byte-identical across runs of the same seed") {
  ScenarioConfig config = DefaultConfig(4, 2, 1, 5);
  RunOutput a = RunScenario(config);
  RunOutput b = RunScenario(config);
  CHECK(a.transcript == b.transcript);
  ScenarioConfig other = DefaultConfig(4, 2, 1, 6);
  RunOutput c = RunScenario(other);
  CHECK(a.transcript != c.transcript);
}

TEST_CASE("export refuses a live election") {
  auto group = std::make_shared<Group>(Group::TestGroup());
  Election e = MakeElection(group, "election-x", "authority", {"c1", "c2"}, 1, PhaseWindows{});
  CHECK_THROWS(ExportTranscript(e));
}
