// Copyright 2026 The sblvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.  Talks to the engine exclusively through the C API
// in sbl/sbl.h; all protocol logic lives behind that boundary.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbl/sbl.h"

namespace {

// Exit codes: 0 success, 1 invalid transcript, 2 configuration error,
// 3 IO or parse error.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Owns one sbl_buffer for the duration of a scope.
class Buffer {
 public:
  Buffer() : buffer_{nullptr, 0} {}
  ~Buffer() { sbl_buffer_free(&buffer_); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;

  sbl_buffer* ptr() { return &buffer_; }
  bool empty() const { return buffer_.data == nullptr || buffer_.size == 0; }
  std::string str() const {
    if (buffer_.data == nullptr) return "";
    return std::string(reinterpret_cast<const char*>(buffer_.data), buffer_.size);
  }

 private:
  sbl_buffer buffer_;
};

int ExitCodeFor(sbl_status status) {
  switch (status) {
    case SBL_OK:
      return kExitOk;
    case SBL_ERROR_CONFIG:
      return kExitConfig;
    default:
      return kExitIo;
  }
}

int Fail(sbl_status status, const std::string& action) {
  std::cerr << "error: " << action << ": " << sbl_last_error() << "\n";
  return ExitCodeFor(status);
}

bool ReadFile(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream body;
  body << in.rdbuf();
  *out = body.str();
  return in.good() || in.eof();
}

bool WriteFile(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << body;
  out.flush();
  return out.good();
}

int RunGenConfig(uint32_t voters, uint32_t candidates, uint32_t booths, uint64_t seed,
                 const std::string& out_path) {
  Buffer config;
  sbl_status status = sbl_config_default(voters, candidates, booths, seed, config.ptr());
  if (status != SBL_OK) return Fail(status, "generating configuration");
  if (out_path.empty()) {
    std::cout << config.str() << "\n";
    return kExitOk;
  }
  if (!WriteFile(out_path, config.str() + "\n")) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int RunRun(const std::string& config_path, const std::string& out_path,
           const std::string& result_path) {
  std::string config;
  if (!ReadFile(config_path, &config)) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return kExitIo;
  }
  Buffer transcript;
  Buffer result;
  Buffer expectations;
  sbl_status status = sbl_run(config.c_str(), transcript.ptr(), result.ptr(), expectations.ptr());
  if (status != SBL_OK) return Fail(status, "running scenario");
  if (!WriteFile(out_path, transcript.str())) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitIo;
  }
  if (!expectations.empty()) {
    const std::string sidecar = out_path + ".expect.json";
    if (!WriteFile(sidecar, expectations.str() + "\n")) {
      std::cerr << "error: cannot write " << sidecar << "\n";
      return kExitIo;
    }
    std::cerr << "note: attack expectations written to " << sidecar << "\n";
  }
  if (!result_path.empty()) {
    if (!WriteFile(result_path, result.str() + "\n")) {
      std::cerr << "error: cannot write " << result_path << "\n";
      return kExitIo;
    }
  } else {
    std::cout << result.str() << "\n";
  }
  return kExitOk;
}

int RunVerify(const std::string& transcript_path, const std::string& report_path) {
  std::string body;
  if (!ReadFile(transcript_path, &body)) {
    std::cerr << "error: cannot read " << transcript_path << "\n";
    return kExitIo;
  }
  sbl_transcript* transcript = nullptr;
  sbl_status status = sbl_transcript_parse(reinterpret_cast<const uint8_t*>(body.data()),
                                           body.size(), &transcript);
  if (status != SBL_OK) {
    std::cerr << "INVALID transcript: " << sbl_last_error() << "\n";
    // A transcript rejected by strict import is an invalid transcript, the
    // same verdict as a failed audit check.
    return status == SBL_ERROR_PARSE ? kExitInvalid : ExitCodeFor(status);
  }
  int valid = 0;
  Buffer report;
  Buffer summary;
  status = sbl_transcript_audit(transcript, &valid, report.ptr(), summary.ptr());
  sbl_transcript_free(transcript);
  if (status != SBL_OK) return Fail(status, "auditing transcript");
  std::cout << summary.str() << "\n";
  if (!report_path.empty()) {
    if (!WriteFile(report_path, report.str() + "\n")) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return kExitIo;
    }
  }
  return valid == 1 ? kExitOk : kExitInvalid;
}

int RunBench(const std::string& config_path, const std::string& out_path) {
  std::string config;
  if (!ReadFile(config_path, &config)) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return kExitIo;
  }
  Buffer csv;
  sbl_status status = sbl_bench(config.c_str(), csv.ptr());
  if (status != SBL_OK) return Fail(status, "benchmarking scenario");
  if (out_path.empty()) {
    std::cout << csv.str();
    return kExitOk;
  }
  if (!WriteFile(out_path, csv.str())) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("sblvote: verifiable self-tallying elections (") + sbl_version() + ")"};
  app.require_subcommand(1);

  uint32_t voters = 3;
  uint32_t candidates = 2;
  uint32_t booths = 1;
  uint64_t seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen-config", "Write a scenario configuration");
  gen->add_option("--voters", voters, "Total registered voters")->capture_default_str();
  gen->add_option("--candidates", candidates, "Number of candidates")->capture_default_str();
  gen->add_option("--booths", booths, "Number of booths")->capture_default_str();
  gen->add_option("--seed", seed, "Deterministic run seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  std::string run_config;
  std::string run_out;
  std::string run_result;
  CLI::App* run = app.add_subcommand("run", "Run a scenario and export its transcript");
  run->add_option("--config", run_config, "Scenario configuration JSON")->required();
  run->add_option("--out", run_out, "Transcript output path")->required();
  run->add_option("--result", run_result, "Run summary output path (default: stdout)");

  std::string verify_transcript;
  std::string verify_report;
  CLI::App* verify = app.add_subcommand("verify", "Audit a transcript end to end");
  verify->add_option("transcript", verify_transcript, "Transcript path")->required();
  verify->add_option("--report", verify_report, "Full check report output path");

  std::string bench_config;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Run a scenario and report timings as CSV");
  bench->add_option("--config", bench_config, "Scenario configuration JSON")->required();
  bench->add_option("--out", bench_out, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // app.exit prints the usage or help text; fold every usage error into
    // the documented config exit code (help stays 0).
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (gen->parsed()) return RunGenConfig(voters, candidates, booths, seed, gen_out);
  if (run->parsed()) return RunRun(run_config, run_out, run_result);
  if (verify->parsed()) return RunVerify(verify_transcript, verify_report);
  if (bench->parsed()) return RunBench(bench_config, bench_out);
  return kExitIo;
}
