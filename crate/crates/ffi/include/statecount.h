#ifndef STATECOUNT_H
#define STATECOUNT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_UTF8 = 2,
  SC_STATUS_PARSE = 3,
  SC_STATUS_DOCUMENT = 4,
  SC_STATUS_INVALID_AUTOMATON = 5,
  SC_STATUS_CAP_EXCEEDED = 6,
  SC_STATUS_IO = 7,
  SC_STATUS_INVALID_ARGUMENT = 8,
  SC_STATUS_PANIC = 9,
} ScStatus;

typedef enum ScStartKind {
  SC_START_KIND_START_OF_DATA = 1,
  SC_START_KIND_ALL_INPUT = 2,
} ScStartKind;

typedef enum ScMinimizer {
  SC_MINIMIZER_BRZOZOWSKI = 0,
  SC_MINIMIZER_HOPCROFT = 1,
} ScMinimizer;

/**
 * Opaque automaton handle.
 */
typedef struct ScAutomaton ScAutomaton;

typedef struct ScStats {
  size_t state_count;
  size_t transition_count;
  size_t max_fanout;
  double avg_fanout;
  size_t accept_count;
  size_t start_count;
} ScStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next call into this library on the same thread.
 */
const char *sc_last_error(void);

/**
 * # Safety
 * `regex` must be a nul-terminated string; `out` must be writable.
 */
enum ScStatus sc_compile_regex(const char *regex,
                               enum ScStartKind start_kind,
                               struct ScAutomaton **out);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ScStatus sc_automaton_from_json(const char *json, struct ScAutomaton **out);

/**
 * Serializes to a newly allocated string; release it with `sc_string_free`.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_automaton_to_json(const struct ScAutomaton *a, char **out);

/**
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum ScStatus sc_automaton_load(const char *path, struct ScAutomaton **out);

/**
 * # Safety
 * `a` must be a live handle; `path` a nul-terminated string.
 */
enum ScStatus sc_automaton_save(const struct ScAutomaton *a, const char *path);

/**
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_optimize(const struct ScAutomaton *a, struct ScAutomaton **out);

/**
 * `cap` of 0 selects the default state cap.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_determinize(const struct ScAutomaton *a, size_t cap, struct ScAutomaton **out);

/**
 * `cap` of 0 selects the default state cap.
 *
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_minimize(const struct ScAutomaton *a,
                          enum ScMinimizer minimizer,
                          size_t cap,
                          struct ScAutomaton **out);

/**
 * Writes whether `a` and `b` accept the same language.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ScStatus sc_equivalent(const struct ScAutomaton *a,
                            const struct ScAutomaton *b,
                            size_t cap,
                            bool *out);

/**
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_stats(const struct ScAutomaton *a, struct ScStats *out);

/**
 * Simulates `a` over `len` bytes and writes the number of reports.
 *
 * # Safety
 * `a` must be a live handle; `input` must point to `len` readable bytes
 * (it may be null when `len` is 0); `out` must be writable.
 */
enum ScStatus sc_simulate_report_count(const struct ScAutomaton *a,
                                       const uint8_t *input,
                                       size_t len,
                                       size_t *out);

/**
 * # Safety
 * `a` must be null or a handle from this library not yet freed.
 */
void sc_automaton_free(struct ScAutomaton *a);

/**
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void sc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STATECOUNT_H */
