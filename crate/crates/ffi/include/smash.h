#ifndef SMASH_H
#define SMASH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmashStatus {
  SMASH_STATUS_OK = 0,
  // A verification ran and some diagram failed to commute.
  SMASH_STATUS_CHECK_FAILED = 1,
  // Malformed JSON, a bad reference, or an unreadable file.
  SMASH_STATUS_INPUT_ERROR = 2,
  SMASH_STATUS_NULL_ARGUMENT = 3,
  SMASH_STATUS_INVALID_UTF8 = 4,
  // The input was well formed but a construction step had no solution.
  SMASH_STATUS_CONSTRUCTION_ERROR = 5,
  SMASH_STATUS_PANIC = 6,
} SmashStatus;

typedef struct SmashDocument SmashDocument;

typedef struct SmashReport SmashReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a document from a NUL-terminated JSON string.
enum SmashStatus smash_document_parse(const char *json, struct SmashDocument **out);

enum SmashStatus smash_document_load(const char *path, struct SmashDocument **out);

// `doc` must come from this library and not be used afterwards.
void smash_document_free(struct SmashDocument *doc);

// Serializes a document; free the string with `smash_string_free`.
enum SmashStatus smash_document_to_json(const struct SmashDocument *doc, char **out);

// Verifies every section. Returns `SMASH_STATUS_CHECK_FAILED` when a
// diagram fails; the report is written in either case.
enum SmashStatus smash_document_check(const struct SmashDocument *doc, struct SmashReport **out);

// Builds the smash product of the document's prestack as a new comodule
// category document.
enum SmashStatus smash_document_smash(const struct SmashDocument *doc, struct SmashDocument **out);

// Coinvariants of the document's comodule category, or of its prestack's
// smash product (in which case recovery is verified too).
enum SmashStatus smash_document_coinvariants(const struct SmashDocument *doc,
                                             struct SmashDocument **out);

// Dimensions of the objects of objects and of morphisms of the document's
// first comodule category, or else of its prestack's category.
enum SmashStatus smash_document_dims(const struct SmashDocument *doc,
                                     uintptr_t *objects,
                                     uintptr_t *morphisms);

bool smash_report_passed(const struct SmashReport *report);

// True when the failures are exactly those the document lists as expected.
bool smash_report_matches_expectation(const struct SmashReport *report);

uintptr_t smash_report_checked_count(const struct SmashReport *report);

uintptr_t smash_report_failure_count(const struct SmashReport *report);

// Name of the `index`th failing diagram; free with `smash_string_free`.
enum SmashStatus smash_report_failure_name(const struct SmashReport *report,
                                           uintptr_t index,
                                           char **out);

enum SmashStatus smash_report_to_json(const struct SmashReport *report, char **out);

// `report` must come from this library and not be used afterwards.
void smash_report_free(struct SmashReport *report);

// `s` must come from this library and not be used afterwards.
void smash_string_free(char *s);

// Message for the last failing call on this thread, or null. Owned by the
// library and valid until the next call.
const char *smash_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMASH_H */
