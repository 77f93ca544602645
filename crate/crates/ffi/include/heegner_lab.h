#ifndef HEEGNER_LAB_H
#define HEEGNER_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HlLabel {
  HL_LABEL_ID = 0,
  HL_LABEL_S = 1,
  HL_LABEL_MINUS_S = 2,
  HL_LABEL_MINUS_ID = 3,
  HL_LABEL_NONTRIVIAL = 4,
} HlLabel;

typedef enum HlNormality {
  HL_NORMALITY_NORMAL_STABLE = 0,
  HL_NORMALITY_NORMAL = 1,
  HL_NORMALITY_NOT_NORMAL = 2,
  HL_NORMALITY_UNDECIDED = 3,
} HlNormality;

/*
 Result codes. `HL_STATUS_VALIDATION` and `HL_STATUS_BUDGET_EXCEEDED`
 match the CLI exit codes 2 and 3.
 */
typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_NULL_POINTER = 1,
  HL_STATUS_VALIDATION = 2,
  HL_STATUS_BUDGET_EXCEEDED = 3,
  HL_STATUS_PARSE = 4,
  HL_STATUS_UNSUPPORTED = 5,
  HL_STATUS_PANIC = 6,
} HlStatus;

/*
 Opaque finite quadratic form.
 */
typedef struct HlDiscForm HlDiscForm;

/*
 Opaque polarization (t, d, γ, c).
 */
typedef struct HlPolarization HlPolarization;

/*
 Invariants of a reflection vector β = a·m + b·k + c·ℓ.
 */
typedef struct HlReflectionClass {
  int64_t beta_sq;
  int64_t div;
  /*
   β_* in Z/2d × Z/2t
   */
  uint64_t beta_star[2];
  int32_t label;
} HlReflectionClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *hl_version(void);

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *hl_last_error_message(void);

/*
 # Safety
 `s` must be NULL or a string returned by this library.
 */
void hl_string_free(char *s);

/*
 Validates (t, d, γ, c); pass `c < 0` to let the library choose c.

 # Safety
 `out` must be valid for writes.
 */
enum HlStatus hl_polarization_new(uint64_t t,
                                  uint64_t d,
                                  uint64_t gamma,
                                  int64_t c,
                                  struct HlPolarization **out);

/*
 # Safety
 `pol` must be NULL or a handle from [`hl_polarization_new`].
 */
void hl_polarization_free(struct HlPolarization *pol);

/*
 Writes c and b = (d + t c²)/γ².

 # Safety
 `pol` must be a live handle and the out-pointers valid for writes.
 */
enum HlStatus hl_polarization_params(const struct HlPolarization *pol,
                                     uint64_t *c_out,
                                     uint64_t *b_out,
                                     uint64_t *omega_out);

/*
 A_{h⊥}: the split presentation (k̄₁, k̄₂) when ω = 1, else the Smith one.

 # Safety
 `pol` must be a live handle and `out` valid for writes.
 */
enum HlStatus hl_perp_disc_form(const struct HlPolarization *pol, struct HlDiscForm **out);

/*
 # Safety
 `form` must be NULL or a handle from this library.
 */
void hl_disc_form_free(struct HlDiscForm *form);

/*
 Number of generators, or 0 for NULL.

 # Safety
 `form` must be NULL or a live handle.
 */
size_t hl_disc_form_rank(const struct HlDiscForm *form);

/*
 |A|, or 0 for NULL.

 # Safety
 `form` must be NULL or a live handle.
 */
uint64_t hl_disc_form_cardinality(const struct HlDiscForm *form);

/*
 Order of generator `i`.

 # Safety
 `form` must be a live handle and `out` valid for writes.
 */
enum HlStatus hl_disc_form_order(const struct HlDiscForm *form, size_t i, uint64_t *out);

/*
 The form as JSON: {"orders", "q_gen", "pairing"}.

 # Safety
 `form` must be a live handle and `out` valid for writes.
 */
enum HlStatus hl_disc_form_json(const struct HlDiscForm *form, char **out);

/*
 Normality verdict for (t, d, γ, c); `c < 0` lets the library choose c and
 `budget = 0` selects the default.

 # Safety
 `out` must be valid for writes.
 */
enum HlStatus hl_normality(uint64_t t,
                           uint64_t d,
                           uint64_t gamma,
                           int64_t c,
                           uint64_t budget,
                           enum HlNormality *out);

/*
 Classifies β = a·m + b·k + c·ℓ with m² = `msq` for γ = 1.

 # Safety
 `out` must be valid for writes.
 */
enum HlStatus hl_classify(uint64_t t,
                          uint64_t d,
                          int64_t a,
                          int64_t msq,
                          int64_t b,
                          int64_t c,
                          struct HlReflectionClass *out);

/*
 disc(⟨h, β⟩⊥) = −4dβ²/div(β)² for fourfolds (t = 1, γ = 1).

 # Safety
 `out` must be valid for writes.
 */
enum HlStatus hl_disc_kperp(uint64_t d,
                            int64_t a,
                            int64_t msq,
                            int64_t b,
                            int64_t c,
                            uint64_t *out);

/*
 The `enumerate` report as JSON.

 # Safety
 `out` must be valid for writes.
 */
enum HlStatus hl_enumerate_json(uint64_t m, uint64_t d, uint64_t budget, char **out);

/*
 The `analyze` report as JSON; `c < 0` lets the library choose c.

 # Safety
 `out` must be valid for writes.
 */
enum HlStatus hl_analyze_json(uint64_t m,
                              uint64_t d,
                              uint64_t gamma,
                              int64_t c,
                              uint64_t budget,
                              char **out);

/*
 Copies the message of the last error into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length.

 # Safety
 `buf` must be NULL or valid for `len` bytes.
 */
size_t hl_last_error_copy(char *buf, size_t len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HEEGNER_LAB_H */
