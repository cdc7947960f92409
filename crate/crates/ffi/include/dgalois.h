#ifndef DGALOIS_H
#define DGALOIS_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DgStatus {
  DG_STATUS_OK = 0,
  DG_STATUS_VERIFICATION_FAILED = 1,
  DG_STATUS_BAD_INPUT = 2,
  DG_STATUS_RESOURCE_CAP = 3,
  DG_STATUS_NULL_POINTER = 4,
  DG_STATUS_INTERNAL = 5,
} DgStatus;

/**
 * Outcome of verifying a system.
 */
typedef struct DgReport DgReport;

/**
 * An assembled system `Y' = A Y` with everything needed to re-verify it.
 */
typedef struct DgSystem DgSystem;

/**
 * Weyl group action on a minuscule orbit with all its cycle types.
 */
typedef struct DgWeylReport DgWeylReport;

/**
 * Message of the last failure on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *dg_last_error(void);

/**
 * # Safety
 * `s` is NULL or was returned by this library and not yet freed.
 */
void dg_string_free(char *s);

/**
 * Enumerate the Weyl group of `kind` (A, B, C, D, E6, E7) and rank on its
 * first minuscule orbit. `cap` bounds stored elements; 0 uses the default
 * memory budget.
 *
 * # Safety
 * `kind` is a valid C string and `out` a valid pointer.
 */
enum DgStatus dg_weyl_report_new(const char *kind,
                                 uintptr_t rank,
                                 uintptr_t cap,
                                 struct DgWeylReport **out);

/**
 * # Safety
 * `r` is a live handle.
 */
uint64_t dg_weyl_report_group_order(const struct DgWeylReport *r);

/**
 * # Safety
 * `r` is a live handle.
 */
uintptr_t dg_weyl_report_orbit_size(const struct DgWeylReport *r);

/**
 * # Safety
 * `r` is a live handle.
 */
uintptr_t dg_weyl_report_cycle_type_count(const struct DgWeylReport *r);

/**
 * JSON text of the report; free with `dg_string_free`. NULL on failure.
 *
 * # Safety
 * `r` is a live handle.
 */
char *dg_weyl_report_to_json(const struct DgWeylReport *r);

/**
 * # Safety
 * `r` is NULL or a handle not yet freed.
 */
void dg_weyl_report_free(struct DgWeylReport *r);

/**
 * Strict transitivity on `m` points of `count` cycle types, given as
 * `lengths[i]` parts each, concatenated in `parts`.
 *
 * # Safety
 * `parts` holds sum(lengths) values, `lengths` holds `count`, `out` is valid.
 */
enum DgStatus dg_is_strictly_transitive(const uintptr_t *parts,
                                        const uintptr_t *lengths,
                                        uintptr_t count,
                                        uintptr_t m,
                                        bool *out);

/**
 * Assemble a system. `group` is comma-separated ("sl2,sp4"), `action` is
 * trivial, conjugation or transpose-inverse, `points` comma-separated
 * rationals ("4,9,16").
 *
 * # Safety
 * String arguments are valid C strings and `out` a valid pointer.
 */
enum DgStatus dg_system_build(const char *group,
                              const char *action,
                              uint32_t order,
                              const char *points,
                              struct DgSystem **out);

/**
 * # Safety
 * `text` is a valid C string and `out` a valid pointer.
 */
enum DgStatus dg_system_from_json(const char *text, struct DgSystem **out);

/**
 * # Safety
 * `s` is a live handle.
 */
char *dg_system_to_json(const struct DgSystem *s);

/**
 * New system with one documented mutation applied (see `verify --mutate`).
 *
 * # Safety
 * `s` is a live handle, `mutation` a valid C string, `out` a valid pointer.
 */
enum DgStatus dg_system_mutate(const struct DgSystem *s,
                               const char *mutation,
                               struct DgSystem **out);

/**
 * # Safety
 * `s` is NULL or a handle not yet freed.
 */
void dg_system_free(struct DgSystem *s);

/**
 * Verify every hypothesis. The report is produced whenever the record is
 * well formed; the status is `VerificationFailed` if any check fails.
 *
 * # Safety
 * `s` is a live handle and `out` a valid pointer.
 */
enum DgStatus dg_system_verify(const struct DgSystem *s, struct DgReport **out);

/**
 * # Safety
 * `r` is a live handle.
 */
bool dg_report_passed(const struct DgReport *r);

/**
 * # Safety
 * `r` is a live handle.
 */
uintptr_t dg_report_check_count(const struct DgReport *r);

/**
 * # Safety
 * `r` is a live handle.
 */
uintptr_t dg_report_failed_count(const struct DgReport *r);

/**
 * # Safety
 * `r` is a live handle.
 */
char *dg_report_to_json(const struct DgReport *r);

/**
 * # Safety
 * `r` is NULL or a handle not yet freed.
 */
void dg_report_free(struct DgReport *r);

/**
 * Run a named fixture and return its JSON log in `out_json` (free with
 * `dg_string_free`). `VerificationFailed` if any of its checks fail.
 *
 * # Safety
 * `fixture` is a valid C string and `out_json` a valid pointer.
 */
enum DgStatus dg_reproduce(const char *fixture, char **out_json);

#endif  /* DGALOIS_H */
