/* Copyright 2026 The sblvote Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sblvote election engine.
 *
 * All functions return sbl_status; outputs are written through pointers.
 * Byte outputs arrive as sbl_buffer values owned by the caller and released
 * with sbl_buffer_free.  On any non-SBL_OK return, sbl_last_error() holds a
 * thread-local human-readable message valid until the next call on the same
 * thread.
 */

#ifndef SBL_SBL_H_
#define SBL_SBL_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbl_status {
  SBL_OK = 0,
  SBL_ERROR_INVALID_ARGUMENT = 1,
  SBL_ERROR_CONFIG = 2,
  SBL_ERROR_PARSE = 3,
  SBL_ERROR_RUNTIME = 4,
} sbl_status;

/* Heap buffer handed to the caller.  data is NUL-terminated for convenience
 * (the terminator is not counted in size). */
typedef struct sbl_buffer {
  uint8_t* data;
  size_t size;
} sbl_buffer;

/* Library version string, static storage. */
const char* sbl_version(void);

/* Message for the most recent failure on this thread, or "" if none. */
const char* sbl_last_error(void);

/* Releases a buffer returned by this library.  Safe on zeroed buffers. */
void sbl_buffer_free(sbl_buffer* buffer);

/* Writes the default scenario configuration JSON for the given shape. */
sbl_status sbl_config_default(uint32_t voters, uint32_t candidates, uint32_t booths,
                              uint64_t seed, sbl_buffer* out_config_json);

/* Runs one scenario from configuration JSON.  transcript receives the full
 * election transcript; result_json the run summary.  expectations_json
 * receives the attack-expectation sidecar when the configuration declares
 * attacks, otherwise it is zeroed.  Any output pointer may be NULL to skip
 * that output. */
sbl_status sbl_run(const char* config_json, sbl_buffer* out_transcript,
                   sbl_buffer* out_result_json, sbl_buffer* out_expectations_json);

/* Runs one scenario and reports timing and counters as "metric,value" CSV. */
sbl_status sbl_bench(const char* config_json, sbl_buffer* out_csv);

/* Parsed transcript handle. */
typedef struct sbl_transcript sbl_transcript;

/* Parses and structurally validates transcript bytes.  On SBL_ERROR_PARSE the
 * handle is not created and sbl_last_error() names the defect. */
sbl_status sbl_transcript_parse(const uint8_t* data, size_t size, sbl_transcript** out);

void sbl_transcript_free(sbl_transcript* transcript);

/* Replays and audits a parsed transcript.  out_valid receives 1 when every
 * check passes, else 0.  out_report_json (optional) receives the full check
 * report; out_summary (optional) a one-line verdict. */
sbl_status sbl_transcript_audit(const sbl_transcript* transcript, int* out_valid,
                                sbl_buffer* out_report_json, sbl_buffer* out_summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SBL_SBL_H_ */
