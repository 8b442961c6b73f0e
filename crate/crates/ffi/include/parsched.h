#ifndef PARSCHED_H
#define PARSCHED_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Algorithm selector for `ps_runner_new`.
#define PS_ALG_GENERAL 0

#define PS_ALG_SORTED 1

#define PS_ALG_MULTI 2

#define PS_ALG_UNIT 3

#define PS_ALG_LIST 4

typedef enum PsStatus {
  PS_OK = 0,
  PS_NULL_POINTER = 1,
  PS_INVALID_ARGUMENT = 2,
  PS_BAD_DELTA = 3,
  PS_NON_POSITIVE_SIZE = 4,
  PS_UNSORTED_INPUT = 5,
  PS_INVARIANT_VIOLATION = 6,
  PS_OUT_OF_RANGE = 7,
  PS_BUFFER_TOO_SMALL = 8,
  PS_PANIC = 9,
} PsStatus;

// Opaque algorithm instance.
typedef struct PsRunner PsRunner;

// One piece of a solution. `machine` is 1 or 2; `job` is 1-based.
typedef struct PsPiece {
  uint8_t machine;
  size_t job;
  double start;
  double end;
} PsPiece;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a runner for `algorithm` (one of the `PS_ALG_*` constants).
// `delta` is only read by the multi-solution algorithm.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum PsStatus ps_runner_new(uint32_t algorithm, double delta, struct PsRunner **out);

// Releases a runner. Null is ignored.
//
// # Safety
// `runner` must be null or a pointer returned by `ps_runner_new` that has
// not been freed.
void ps_runner_free(struct PsRunner *runner);

// Presents the next job. On a rejected job the runner is unchanged, except
// after `PS_INVARIANT_VIOLATION` or `PS_PANIC`, which leave it unusable.
//
// # Safety
// `runner` must be a live pointer from `ps_runner_new`.
enum PsStatus ps_runner_step(struct PsRunner *runner, double size);

// # Safety
// `runner` must be live; `out` must be writable.
enum PsStatus ps_runner_job_count(const struct PsRunner *runner, size_t *out);

// # Safety
// `runner` must be live; `out` must be writable.
enum PsStatus ps_runner_solution_count(const struct PsRunner *runner, size_t *out);

// Best maximum completion time over the solutions (0 before any job).
//
// # Safety
// `runner` must be live; `out` must be writable.
enum PsStatus ps_runner_makespan(const struct PsRunner *runner, double *out);

// Optimal offline makespan of the jobs presented so far.
//
// # Safety
// `runner` must be live; `out` must be writable.
enum PsStatus ps_runner_opt(const struct PsRunner *runner, double *out);

// Writes the completion times of machines 1 and 2 of one solution.
//
// # Safety
// `runner` must be live; `out` must point to two writable doubles.
enum PsStatus ps_runner_solution_loads(const struct PsRunner *runner, size_t solution, double *out);

// Copies the pieces of one solution into `buf`. `*written` receives the
// number of pieces; when `capacity` is too small (or `buf` is null) nothing
// is copied and `PS_BUFFER_TOO_SMALL` is returned with the required count.
//
// # Safety
// `runner` must be live; `buf` must be null or hold `capacity` pieces;
// `written` must be writable.
enum PsStatus ps_runner_pieces(const struct PsRunner *runner,
                               size_t solution,
                               struct PsPiece *buf,
                               size_t capacity,
                               size_t *written);

// Optimal preemptive makespan `max(W/2, p_max)` of `n` sizes.
//
// # Safety
// `sizes` must hold `n` doubles (it may be null when `n` is 0); `out` must
// be writable.
enum PsStatus ps_opt_makespan(const double *sizes, size_t n, double *out);

// Copies the calling thread's last error message into `buf` (NUL
// terminated, truncated to `capacity`). Returns the full message length
// without the terminator.
//
// # Safety
// `buf` must be null or hold `capacity` bytes.
size_t ps_last_error_message(char *buf, size_t capacity);

// Library version as a static NUL-terminated string.
const char *ps_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARSCHED_H */
