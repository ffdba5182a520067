#ifndef UPTRANS_H
#define UPTRANS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define UPTRANS_OK 0

// At least one declaration or goal failed.
#define UPTRANS_FAIL 1

#define UPTRANS_ERR_PARSE 2

#define UPTRANS_ERR_NULL 3

#define UPTRANS_ERR_UTF8 4

#define UPTRANS_ERR_PANIC 5

// Normalization ran out of steps; the partial result is still returned.
#define UPTRANS_ERR_BUDGET 6

typedef struct UptransSession UptransSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a session with the prelude loaded and stores it in `*out`.
//
// # Safety
// `out` must be valid for writes.
int uptrans_session_new(struct UptransSession **out);

// # Safety
// `s` must come from `uptrans_session_new` and not be used afterwards.
// Null is accepted.
void uptrans_session_free(struct UptransSession *s);

// Sets the reduction step budget used by later calls.
//
// # Safety
// `s` must be a live session or null.
int uptrans_session_set_budget(struct UptransSession *s, uint64_t budget);

// Processes a module (definitions, relations, transports, goals) in the
// session. When `out_json` is non-null it receives one json line per
// reported item. Returns `UPTRANS_FAIL` if any item failed; earlier items
// stay in the session.
//
// # Safety
// `s` must be a live session, `module` a NUL-terminated string, and
// `out_json` null or valid for writes.
int uptrans_session_load(struct UptransSession *s, const char *module, char **out_json);

// Runs the embedded replay script in the session.
//
// # Safety
// As for `uptrans_session_load`.
int uptrans_session_replay(struct UptransSession *s, char **out_json);

// Normalizes a closed term and stores its printed normal form in `*out`.
//
// # Safety
// `s` must be a live session, `term` a NUL-terminated string and `out`
// valid for writes.
int uptrans_session_normalize(struct UptransSession *s, const char *term, char **out);

// Message of the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *uptrans_last_error(void);

// # Safety
// `p` must come from this library and not be freed twice. Null is accepted.
void uptrans_string_free(char *p);

const char *uptrans_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UPTRANS_H */
