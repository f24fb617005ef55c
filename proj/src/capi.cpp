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

#include "sbl/sbl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "sim.hpp"
#include "transcript.hpp"

namespace {

thread_local std::string g_last_error;

void SetError(const std::string& message) { g_last_error = message; }

void ClearError() { g_last_error.clear(); }

// Copies bytes into a malloc'd NUL-terminated buffer.
sbl_status FillBuffer(sbl_buffer* out, const uint8_t* data, size_t size) {
  if (out == nullptr) return SBL_OK;
  out->data = nullptr;
  out->size = 0;
  auto* copy = static_cast<uint8_t*>(std::malloc(size + 1));
  if (copy == nullptr) {
    SetError("out of memory");
    return SBL_ERROR_RUNTIME;
  }
  if (size > 0) std::memcpy(copy, data, size);
  copy[size] = 0;
  out->data = copy;
  out->size = size;
  return SBL_OK;
}

sbl_status FillBuffer(sbl_buffer* out, const std::string& text) {
  return FillBuffer(out, reinterpret_cast<const uint8_t*>(text.data()), text.size());
}

sbl_status FillBuffer(sbl_buffer* out, const sbl::Bytes& bytes) {
  return FillBuffer(out, bytes.data(), bytes.size());
}

void ZeroBuffer(sbl_buffer* out) {
  if (out == nullptr) return;
  out->data = nullptr;
  out->size = 0;
}

// Maps C++ failures onto C status codes.  Must be called inside a catch-all.
sbl_status StatusForCurrentException() {
  try {
    throw;
  } catch (const sbl::ConfigError& e) {
    SetError(e.what());
    return SBL_ERROR_CONFIG;
  } catch (const sbl::Error& e) {
    SetError(e.what());
    return SBL_ERROR_RUNTIME;
  } catch (const std::exception& e) {
    SetError(e.what());
    return SBL_ERROR_RUNTIME;
  } catch (...) {
    SetError("unknown failure");
    return SBL_ERROR_RUNTIME;
  }
}

}  // namespace

struct sbl_transcript {
  sbl::ElectionTranscript parsed;
};

extern "C" {

const char* sbl_version(void) { return "sblvote 1.0.0"; }

const char* sbl_last_error(void) { return g_last_error.c_str(); }

void sbl_buffer_free(sbl_buffer* buffer) {
  if (buffer == nullptr) return;
  std::free(buffer->data);
  buffer->data = nullptr;
  buffer->size = 0;
}

sbl_status sbl_config_default(uint32_t voters, uint32_t candidates, uint32_t booths,
                              uint64_t seed, sbl_buffer* out_config_json) {
  ClearError();
  ZeroBuffer(out_config_json);
  if (out_config_json == nullptr) {
    SetError("out_config_json must not be NULL");
    return SBL_ERROR_INVALID_ARGUMENT;
  }
  try {
    sbl::ScenarioConfig config = sbl::DefaultConfig(voters, candidates, booths, seed);
    config.Validate();
    return FillBuffer(out_config_json, config.ToJson().dump(2));
  } catch (...) {
    return StatusForCurrentException();
  }
}

sbl_status sbl_run(const char* config_json, sbl_buffer* out_transcript,
                   sbl_buffer* out_result_json, sbl_buffer* out_expectations_json) {
  ClearError();
  ZeroBuffer(out_transcript);
  ZeroBuffer(out_result_json);
  ZeroBuffer(out_expectations_json);
  if (config_json == nullptr) {
    SetError("config_json must not be NULL");
    return SBL_ERROR_INVALID_ARGUMENT;
  }
  try {
    sbl::ScenarioConfig config = sbl::ScenarioConfig::FromJsonText(config_json);
    sbl::RunOutput output = sbl::RunScenario(config);
    sbl_status status = FillBuffer(out_transcript, output.transcript);
    if (status != SBL_OK) return status;
    status = FillBuffer(out_result_json, output.result.ToJson().dump(2));
    if (status != SBL_OK) {
      sbl_buffer_free(out_transcript);
      return status;
    }
    if (output.expectations.has_value()) {
      status = FillBuffer(out_expectations_json, output.expectations->dump(2));
      if (status != SBL_OK) {
        sbl_buffer_free(out_transcript);
        sbl_buffer_free(out_result_json);
        return status;
      }
    }
    return SBL_OK;
  } catch (...) {
    return StatusForCurrentException();
  }
}

sbl_status sbl_bench(const char* config_json, sbl_buffer* out_csv) {
  ClearError();
  ZeroBuffer(out_csv);
  if (config_json == nullptr || out_csv == nullptr) {
    SetError("config_json and out_csv must not be NULL");
    return SBL_ERROR_INVALID_ARGUMENT;
  }
  try {
    sbl::ScenarioConfig config = sbl::ScenarioConfig::FromJsonText(config_json);
    sbl::RunOutput output = sbl::RunScenario(config);
    return FillBuffer(out_csv, sbl::BenchCsv(config, output.result));
  } catch (...) {
    return StatusForCurrentException();
  }
}

sbl_status sbl_transcript_parse(const uint8_t* data, size_t size, sbl_transcript** out) {
  ClearError();
  if (out == nullptr) {
    SetError("out must not be NULL");
    return SBL_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  if (data == nullptr && size > 0) {
    SetError("data must not be NULL");
    return SBL_ERROR_INVALID_ARGUMENT;
  }
  try {
    sbl::Bytes bytes(data, data + size);
    sbl::ImportOutcome imported = sbl::ImportTranscript(bytes);
    if (!imported.ok()) {
      SetError(std::string(sbl::ImportErrorName(imported.error)) + ": " + imported.message);
      return SBL_ERROR_PARSE;
    }
    auto* handle = new (std::nothrow) sbl_transcript{std::move(*imported.transcript)};
    if (handle == nullptr) {
      SetError("out of memory");
      return SBL_ERROR_RUNTIME;
    }
    *out = handle;
    return SBL_OK;
  } catch (...) {
    return StatusForCurrentException();
  }
}

void sbl_transcript_free(sbl_transcript* transcript) { delete transcript; }

sbl_status sbl_transcript_audit(const sbl_transcript* transcript, int* out_valid,
                                sbl_buffer* out_report_json, sbl_buffer* out_summary) {
  ClearError();
  ZeroBuffer(out_report_json);
  ZeroBuffer(out_summary);
  if (transcript == nullptr || out_valid == nullptr) {
    SetError("transcript and out_valid must not be NULL");
    return SBL_ERROR_INVALID_ARGUMENT;
  }
  *out_valid = 0;
  try {
    sbl::AuditReport report = sbl::AuditTranscript(transcript->parsed);
    *out_valid = report.valid ? 1 : 0;
    sbl_status status = FillBuffer(out_report_json, report.ToJson().dump(2));
    if (status != SBL_OK) return status;
    status = FillBuffer(out_summary, report.Summary());
    if (status != SBL_OK) {
      sbl_buffer_free(out_report_json);
      return status;
    }
    return SBL_OK;
  } catch (...) {
    return StatusForCurrentException();
  }
}

}  // extern "C"
