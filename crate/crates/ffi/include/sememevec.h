/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef SEMEMEVEC_H
#define SEMEMEVEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SvStatus {
  SV_OK = 0,
  SV_NULL_POINTER = 1,
  SV_INVALID_UTF8 = 2,
  SV_INVALID_ARGUMENT = 3,
  SV_IO = 4,
  SV_PARSE = 5,
  SV_NOT_FOUND = 6,
  SV_BUFFER_TOO_SMALL = 7,
  SV_EVALUATION = 8,
  SV_PANIC = 9,
} SvStatus;

/**
 * Sememe lexicon.
 */
typedef struct SvLexicon SvLexicon;

/**
 * Morphological similarity model.
 */
typedef struct SvSimilarityModel SvSimilarityModel;

/**
 * Word or sememe vector space.
 */
typedef struct SvSpace SvSpace;

/**
 * Trained tagger with its label strings.
 */
typedef struct SvTagger SvTagger;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The string stays
 * valid until the next call into this library on the same thread.
 */
const char *sv_last_error_message(void);

/**
 * Loads a vector file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SvStatus sv_space_load(const char *path, struct SvSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from [`sv_space_load`] not yet freed.
 */
void sv_space_free(struct SvSpace *space);

/**
 * Vector dimension, or 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t sv_space_dim(const struct SvSpace *space);

/**
 * Number of vectors, or 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t sv_space_len(const struct SvSpace *space);

/**
 * Copies the vector of `token` into `out` (capacity `len`).
 *
 * # Safety
 * `space` must be a live handle, `token` NUL-terminated, `out` writable for `len` doubles.
 */
enum SvStatus sv_space_lookup(const struct SvSpace *space,
                              const char *token,
                              double *out,
                              size_t len);

/**
 * Cosine of two arrays of length `len`; 0 if either is a zero vector or null.
 *
 * # Safety
 * `a` and `b` must be readable for `len` doubles.
 */
double sv_cosine(const double *a, const double *b, size_t len);

/**
 * # Safety
 * `path` must be NUL-terminated and `out` a valid pointer.
 */
enum SvStatus sv_lexicon_load(const char *path, struct SvLexicon **out);

/**
 * # Safety
 * `lexicon` must be null or a handle from [`sv_lexicon_load`] not yet freed.
 */
void sv_lexicon_free(struct SvLexicon *lexicon);

/**
 * Sum of the sememe vectors of `word`'s first sense, written to `out`.
 *
 * # Safety
 * Handles must be live, `word` NUL-terminated, `out` writable for `len` doubles.
 */
enum SvStatus sv_hownet_vector(const struct SvLexicon *lexicon,
                               const struct SvSpace *sememe_space,
                               const char *word,
                               double *out,
                               size_t len);

/**
 * Five-bucket term-frequency weight in 0..=4.
 */
uint8_t sv_tf_bucket(uint64_t tf);

/**
 * # Safety
 * `path` must be NUL-terminated and `out` a valid pointer.
 */
enum SvStatus sv_simmodel_load(const char *path, struct SvSimilarityModel **out);

/**
 * # Safety
 * `model` must be null or a handle from [`sv_simmodel_load`] not yet freed.
 */
void sv_simmodel_free(struct SvSimilarityModel *model);

/**
 * Morphological similarity in [0, 1]; empty words are rejected.
 *
 * # Safety
 * `model` must be live, `a` and `b` NUL-terminated, `out` writable.
 */
enum SvStatus sv_word_similarity(const struct SvSimilarityModel *model,
                                 const char *a,
                                 const char *b,
                                 double *out);

/**
 * # Safety
 * `path` must be NUL-terminated and `out` a valid pointer.
 */
enum SvStatus sv_tagger_load(const char *path, struct SvTagger **out);

/**
 * # Safety
 * `tagger` must be null or a handle from [`sv_tagger_load`] not yet freed.
 */
void sv_tagger_free(struct SvTagger *tagger);

/**
 * Length of the feature vector the tagger expects, or 0 for null.
 *
 * # Safety
 * `tagger` must be null or a live handle.
 */
size_t sv_tagger_feature_dim(const struct SvTagger *tagger);

/**
 * Number of labels, or 0 for null.
 *
 * # Safety
 * `tagger` must be null or a live handle.
 */
size_t sv_tagger_num_labels(const struct SvTagger *tagger);

/**
 * Label string for `index`, owned by the tagger; null when out of range.
 *
 * # Safety
 * `tagger` must be null or a live handle.
 */
const char *sv_tagger_label(const struct SvTagger *tagger, size_t index);

/**
 * Classifies one assembled feature vector. Writes the label index and, if
 * `probs` is non-null, the class probabilities (capacity `probs_len`).
 *
 * # Safety
 * `tagger` must be live, `features` readable for `len` doubles, `label`
 * writable, `probs` null or writable for `probs_len` doubles.
 */
enum SvStatus sv_tagger_predict(const struct SvTagger *tagger,
                                const double *features,
                                size_t len,
                                size_t *label,
                                double *probs,
                                size_t probs_len);

/**
 * Spearman rank correlation of two arrays of length `n`.
 *
 * # Safety
 * `xs` and `ys` must be readable for `n` doubles and `out` writable.
 */
enum SvStatus sv_spearman(const double *xs, const double *ys, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMEMEVEC_H */
