#ifndef AEROQA_H
#define AEROQA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call. Zero is success.
typedef enum AeroqaStatus {
  AEROQA_STATUS_OK = 0,
  AEROQA_STATUS_NULL_ARGUMENT = 1,
  AEROQA_STATUS_INVALID_UTF8 = 2,
  AEROQA_STATUS_PARSE = 3,
  AEROQA_STATUS_VALIDATION = 4,
  AEROQA_STATUS_CONFIG = 5,
  AEROQA_STATUS_NO_MENTION = 6,
  AEROQA_STATUS_REMOTE = 7,
  AEROQA_STATUS_IO = 8,
  AEROQA_STATUS_JSON = 9,
  AEROQA_STATUS_PANIC = 10,
} AeroqaStatus;

// Which modules answer a question.
typedef enum AeroqaSystem {
  AEROQA_SYSTEM_KG = 0,
  AEROQA_SYSTEM_DL = 1,
  AEROQA_SYSTEM_HYBRID = 2,
} AeroqaSystem;

// Opaque engine handle.
typedef struct AeroqaEngine AeroqaEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// success. Valid until the next aeroqa call on the same thread.
const char *aeroqa_last_error(void);

// Library version as a static NUL-terminated string.
const char *aeroqa_version(void);

// Releases a string returned through an `out_json` parameter. Null is ignored.
//
// # Safety
// `s` must come from this library and must not be freed twice.
void aeroqa_string_free(char *s);

// Builds the graph and passage files from a report directory into `out_dir`.
// `taxonomy_path` may be null. On success `out_json` receives
// `{"reports", "passages", "stats", "failures"}`. Per-report failures do not
// make the call fail; inspect `failures`.
//
// # Safety
// Path arguments must be null or NUL-terminated strings; `out_json` must be
// a valid pointer.
enum AeroqaStatus aeroqa_build(const char *reports_dir,
                               const char *patterns_path,
                               const char *taxonomy_path,
                               const char *out_dir,
                               char **out_json);

// Loads an engine from a directory written by `aeroqa_build`.
// `options_json` may be null or an object with any of `provider`, `reader`,
// `reader_mode`, `retriever` (strings) and `k`, `tau`, `theta_link`
// (numbers).
//
// # Safety
// `data_dir` and `options_json` must be null or NUL-terminated strings;
// `out` must be a valid pointer.
enum AeroqaStatus aeroqa_engine_open(const char *data_dir,
                                     const char *options_json,
                                     struct AeroqaEngine **out);

// Releases an engine. Null is ignored.
//
// # Safety
// `engine` must come from `aeroqa_engine_open` and must not be used afterwards.
void aeroqa_engine_free(struct AeroqaEngine *engine);

// Answers a question. `out_json` receives `{"items": [...]}` with up to ten
// items, each carrying `text`, `source` and, for passage answers, `passage`
// and `score`.
//
// # Safety
// `engine` must be a live handle; `question` a NUL-terminated string;
// `out_json` a valid pointer.
enum AeroqaStatus aeroqa_ask(const struct AeroqaEngine *engine,
                             const char *question,
                             enum AeroqaSystem system,
                             char **out_json);

// Translates a question to SPARQL without fusing passage answers.
// `out_json` receives `{"qtype", "query", "answers"}`; `query` is null when
// the question cannot be grounded in the graph.
//
// # Safety
// As for `aeroqa_ask`.
enum AeroqaStatus aeroqa_sparql(const struct AeroqaEngine *engine,
                                const char *question,
                                char **out_json);

// Scores one system on a test-set file. `out_json` receives the evaluation
// report with per-question and mean scores.
//
// # Safety
// `engine` must be a live handle; `testset_path` a NUL-terminated string;
// `out_json` a valid pointer.
enum AeroqaStatus aeroqa_evaluate(const struct AeroqaEngine *engine,
                                  const char *testset_path,
                                  enum AeroqaSystem system,
                                  char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AEROQA_H */
