#ifndef LENCTL_H
#define LENCTL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LenctlReduction {
  LENCTL_REDUCTION_MERGE = 0,
  LENCTL_REDUCTION_NO_MERGE = 1,
} LenctlReduction;

typedef enum LenctlSelection {
  LENCTL_SELECTION_BEST_FEASIBLE = 0,
  LENCTL_SELECTION_LONGEST = 1,
  /**
   * Report `target_bucket` only.
   */
  LENCTL_SELECTION_BUCKET = 2,
} LenctlSelection;

typedef enum LenctlStatus {
  LENCTL_STATUS_OK = 0,
  LENCTL_STATUS_NULL_POINTER = 1,
  LENCTL_STATUS_INVALID_ARGUMENT = 2,
  LENCTL_STATUS_INVALID_INPUT = 3,
  LENCTL_STATUS_IO = 4,
  LENCTL_STATUS_TOO_LARGE = 5,
  LENCTL_STATUS_PANIC = 6,
} LenctlStatus;

typedef enum LenctlWeights {
  LENCTL_WEIGHTS_SEPARATOR = 0,
  LENCTL_WEIGHTS_APPENDED = 1,
  LENCTL_WEIGHTS_UNIT = 2,
} LenctlWeights;

/**
 * Vocabulary plus log-probability matrix.
 */
typedef struct LenctlInstance LenctlInstance;

typedef struct LenctlResult LenctlResult;

typedef struct LenctlDecodeOptions {
  size_t budget;
  size_t bucket_size;
  size_t top_k;
  enum LenctlReduction reduction;
  enum LenctlWeights weights;
  /**
   * Length <= budget when true, < budget otherwise.
   */
  bool inclusive_budget;
  enum LenctlSelection selection;
  size_t target_bucket;
} LenctlDecodeOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options for `budget`: bucket size 4, top-k 20, merging,
 * separator-counted lengths, inclusive budget, best feasible cell.
 */
struct LenctlDecodeOptions lenctl_decode_options_default(size_t budget);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *lenctl_last_error_message(void);

/**
 * Load a matrix file (text or binary).
 */
enum LenctlStatus lenctl_instance_read(const char *path, struct LenctlInstance **out);

/**
 * Build an instance from `vocab_size` token strings, the blank's index and
 * a row-major `slots * vocab_size` array of natural-log probabilities.
 */
enum LenctlStatus lenctl_instance_new(const char *const *tokens,
                                      size_t vocab_size,
                                      size_t blank,
                                      const double *log_probs,
                                      size_t slots,
                                      struct LenctlInstance **out);

void lenctl_instance_free(struct LenctlInstance *instance);

size_t lenctl_instance_slots(const struct LenctlInstance *instance);

size_t lenctl_instance_vocab_size(const struct LenctlInstance *instance);

/**
 * Length-control decode. With bucket_size 1, no merging and a top_k of at
 * least the vocabulary size the result is exact.
 */
enum LenctlStatus lenctl_decode(const struct LenctlInstance *instance,
                                const struct LenctlDecodeOptions *options,
                                struct LenctlResult **out);

/**
 * Per-slot argmax decode with no length control.
 */
enum LenctlStatus lenctl_decode_greedy(const struct LenctlInstance *instance,
                                       enum LenctlReduction reduction,
                                       enum LenctlWeights weights,
                                       struct LenctlResult **out);

/**
 * CTC marginal log-probability of a space-separated word sequence.
 */
enum LenctlStatus lenctl_ctc_score(const struct LenctlInstance *instance,
                                   const char *text,
                                   double *out_log_prob);

/**
 * Summary text, owned by the result.
 */
const char *lenctl_result_text(const struct LenctlResult *result);

/**
 * Path log-probability; NaN for a null handle.
 */
double lenctl_result_score(const struct LenctlResult *result);

size_t lenctl_result_char_len(const struct LenctlResult *result);

/**
 * True when no summary fit the budget and the all-blank path was returned.
 */
bool lenctl_result_fallback(const struct LenctlResult *result);

/**
 * Token ids of the decoded path, one per slot; the length goes to `out_len`.
 */
const size_t *lenctl_result_path(const struct LenctlResult *result, size_t *out_len);

void lenctl_result_free(struct LenctlResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LENCTL_H */
