#ifndef SPEH_KIT_H
#define SPEH_KIT_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_ARGUMENT = 1,
  SK_STATUS_INVALID_UTF8 = 2,
  SK_STATUS_ALPHABET = 3,
  SK_STATUS_SYNTAX = 4,
  SK_STATUS_SEMANTIC = 5,
  SK_STATUS_ALPHABET_MISMATCH = 6,
  SK_STATUS_INTERNAL = 7,
} SkStatus;

/**
 * A loaded cuspidal alphabet.
 */
typedef struct SkAlphabet SkAlphabet;

/**
 * A canonical unitary representation, tied to the alphabet it was parsed with.
 */
typedef struct SkRep SkRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an alphabet from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SkStatus sk_alphabet_load(const char *json, struct SkAlphabet **out);

/**
 * Number of cuspidal symbols in the alphabet.
 *
 * # Safety
 * `alphabet` must be a live handle from [`sk_alphabet_load`] and `out` valid.
 */
enum SkStatus sk_alphabet_len(const struct SkAlphabet *alphabet, size_t *out);

/**
 * # Safety
 * `alphabet` must be null or a handle from [`sk_alphabet_load`] not yet freed.
 * Representations parsed from it stay valid.
 */
void sk_alphabet_free(struct SkAlphabet *alphabet);

/**
 * Parses and canonicalizes an expression such as `u(St(r0,2),3) x St(t,1)`.
 *
 * # Safety
 * `alphabet` must be a live handle, `text` NUL-terminated, `out` valid.
 */
enum SkStatus sk_rep_parse(const struct SkAlphabet *alphabet, const char *text, struct SkRep **out);

/**
 * # Safety
 * `rep` must be null or a handle not yet freed.
 */
void sk_rep_free(struct SkRep *rep);

/**
 * Canonical text of the representation; free with [`sk_string_free`].
 *
 * # Safety
 * `rep` must be a live handle and `out` valid.
 */
enum SkStatus sk_rep_canonical(const struct SkRep *rep, char **out);

/**
 * # Safety
 * `rep` must be a live handle and `out` valid.
 */
enum SkStatus sk_rep_degree(const struct SkRep *rep, uint64_t *out);

/**
 * # Safety
 * `rep` must be a live handle and `out` valid.
 */
enum SkStatus sk_rep_is_distinguished(const struct SkRep *rep, bool *out);

/**
 * Verdict of the derivative-based inductive checker.
 *
 * # Safety
 * `rep` must be a live handle and `out` valid.
 */
enum SkStatus sk_rep_inductive_check(const struct SkRep *rep, bool *out);

/**
 * Proof trace of the verdict as JSON; free with [`sk_string_free`].
 *
 * # Safety
 * `rep` must be a live handle and `out` valid.
 */
enum SkStatus sk_rep_trace_json(const struct SkRep *rep, char **out);

/**
 * Highest shifted derivative, as a new handle.
 *
 * # Safety
 * `rep` must be a live handle and `out` valid.
 */
enum SkStatus sk_rep_derivative(const struct SkRep *rep, struct SkRep **out);

/**
 * Parabolic induction `a x b`. Both handles must come from the same alphabet.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
enum SkStatus sk_rep_product(const struct SkRep *a, const struct SkRep *b, struct SkRep **out);

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *sk_last_error_message(void);

/**
 * 1-based position of the last parse error on this thread; 0 when unknown.
 *
 * # Safety
 * `line` and `column` must each be null or valid.
 */
void sk_last_error_position(size_t *line, size_t *column);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void sk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPEH_KIT_H */
