#ifndef SDS_H
#define SDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdsGoal {
  SDS_GOAL_PROVE_STRICT_POSITIVE = 0,
  SDS_GOAL_PROVE_NONNEGATIVE = 1,
  SDS_GOAL_DECIDE = 2,
} SdsGoal;

typedef enum SdsSignClass {
  SDS_SIGN_CLASS_ALL_POSITIVE = 0,
  SDS_SIGN_CLASS_ALL_NONNEGATIVE = 1,
  SDS_SIGN_CLASS_ALL_NEGATIVE = 2,
  SDS_SIGN_CLASS_ALL_NONPOSITIVE = 3,
  SDS_SIGN_CLASS_MIXED = 4,
  SDS_SIGN_CLASS_ZERO_FORM = 5,
} SdsSignClass;

typedef enum SdsStatus {
  SDS_STATUS_OK = 0,
  SDS_STATUS_NULL_POINTER = 1,
  SDS_STATUS_INVALID_UTF8 = 2,
  SDS_STATUS_PARSE = 3,
  SDS_STATUS_INVALID_INPUT = 4,
  SDS_STATUS_PANIC = 5,
} SdsStatus;

typedef enum SdsVerdict {
  SDS_VERDICT_POSITIVE = 0,
  SDS_VERDICT_NONNEGATIVE = 1,
  SDS_VERDICT_NEGATIVE_WITNESS = 2,
  SDS_VERDICT_UNDECIDED = 3,
} SdsVerdict;

typedef enum SdsZeroVerdict {
  SDS_ZERO_VERDICT_ZERO_FOUND = 0,
  SDS_ZERO_VERDICT_NO_ZERO = 1,
  SDS_ZERO_VERDICT_UNDECIDED = 2,
} SdsZeroVerdict;

typedef struct SdsCertificate SdsCertificate;

// Parsed homogeneous form.
typedef struct SdsForm SdsForm;

// Parsed system of forms.
typedef struct SdsSystem SdsSystem;

typedef struct SdsZeroReport SdsZeroReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *sds_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void sds_string_free(char *s);

// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum SdsStatus sds_form_parse(const char *text, struct SdsForm **out);

// # Safety
// `form` must be null or come from `sds_form_parse`.
void sds_form_free(struct SdsForm *form);

// Canonical text of the form; free with `sds_string_free`.
//
// # Safety
// `form` must be a live handle; `out` must be writable.
enum SdsStatus sds_form_serialize(const struct SdsForm *form, char **out);

// # Safety
// `form` must be a live handle; `out` must be writable.
enum SdsStatus sds_form_classify(const struct SdsForm *form, enum SdsSignClass *out);

// Runs the subdivision search breadth-first. `workers` of 0 means 1.
//
// # Safety
// `form` must be a live handle; `out` must be writable.
enum SdsStatus sds_prove(const struct SdsForm *form,
                         enum SdsGoal goal,
                         uint32_t max_depth,
                         uint32_t workers,
                         struct SdsCertificate **out);

// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum SdsStatus sds_certificate_parse(const char *text, struct SdsCertificate **out);

// # Safety
// `cert` must be null or a handle from this library.
void sds_certificate_free(struct SdsCertificate *cert);

// # Safety
// `cert` must be a live handle; `out` must be writable.
enum SdsStatus sds_certificate_verdict(const struct SdsCertificate *cert, enum SdsVerdict *out);

// # Safety
// `cert` must be a live handle; `out` must be writable.
enum SdsStatus sds_certificate_text(const struct SdsCertificate *cert, char **out);

// Writes whether `cert` holds for `form`.
//
// # Safety
// Both handles must be live; `valid` must be writable.
enum SdsStatus sds_certificate_replay(const struct SdsForm *form,
                                      const struct SdsCertificate *cert,
                                      bool *valid);

// Parses a `---`-separated system with integer coefficients.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum SdsStatus sds_system_parse(const char *text, struct SdsSystem **out);

// # Safety
// `sys` must be null or come from `sds_system_parse`.
void sds_system_free(struct SdsSystem *sys);

// # Safety
// `sys` must be a live handle; `out` must be writable.
enum SdsStatus sds_find_zero(const struct SdsSystem *sys,
                             uint32_t budget,
                             uint32_t workers,
                             struct SdsZeroReport **out);

// # Safety
// `report` must be null or a handle from this library.
void sds_zero_report_free(struct SdsZeroReport *report);

// # Safety
// `report` must be a live handle; `out` must be writable.
enum SdsStatus sds_zero_report_verdict(const struct SdsZeroReport *report,
                                       enum SdsZeroVerdict *out);

// # Safety
// `report` must be a live handle; `out` must be writable.
enum SdsStatus sds_zero_report_text(const struct SdsZeroReport *report, char **out);

// # Safety
// Both handles must be live; `valid` must be writable.
enum SdsStatus sds_zero_report_replay(const struct SdsSystem *sys,
                                      const struct SdsZeroReport *report,
                                      bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SDS_H */
