#ifndef HOMLIE_H
#define HOMLIE_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum HomlieStatus {
  // Success.
  HOMLIE_STATUS_OK = 0,
  // A required pointer argument was null.
  HOMLIE_STATUS_NULL_POINTER = 1,
  // An input string was not valid UTF-8.
  HOMLIE_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or expression input.
  HOMLIE_STATUS_PARSE = 3,
  // The requested object violates a construction precondition.
  HOMLIE_STATUS_INVALID_CONSTRUCTION = 4,
  // The operation is outside the supported scope.
  HOMLIE_STATUS_UNSUPPORTED = 5,
  // An algebraic precondition does not hold.
  HOMLIE_STATUS_PRECONDITION = 6,
  // A configured computation budget would be exceeded.
  HOMLIE_STATUS_BUDGET = 7,
  // Ring mismatch, division by zero or inexact division.
  HOMLIE_STATUS_ARITHMETIC = 8,
  // A map does not respect the defining relations.
  HOMLIE_STATUS_RELATION_VIOLATED = 9,
  // An internal error (a caught panic).
  HOMLIE_STATUS_INTERNAL = 10,
} HomlieStatus;

// Opaque hom-Lie algebra handle.
typedef struct HomlieAlgebra HomlieAlgebra;

// Opaque enveloping-algebra presentation handle.
typedef struct HomliePresentation HomliePresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *homlie_version(void);

// Message of the last failure on this thread (empty after a success).  The
// pointer stays valid until the next call into the library on this thread.
const char *homlie_last_error_message(void);

// Release a string returned by the library.  Null is ignored.
void homlie_string_free(char *s);

// Build an algebra from a family descriptor such as
// `{"family":"kummer-witt","n":3,"r":1,"b":"sym"}`.
enum HomlieStatus homlie_algebra_from_family(const char *descriptor, struct HomlieAlgebra **out);

// Build an algebra from a structure-constant JSON document.
enum HomlieStatus homlie_algebra_from_json(const char *document, struct HomlieAlgebra **out);

// Release an algebra.  Null is ignored.
void homlie_algebra_free(struct HomlieAlgebra *algebra);

// Rank of the underlying module.
enum HomlieStatus homlie_algebra_rank(const struct HomlieAlgebra *algebra, uintptr_t *out);

// Check the alternating and twisted Jacobi axioms; `*passed` receives the
// verdict and `*report_json` (if non-null) the full axiom report.
enum HomlieStatus homlie_algebra_check_axioms(const struct HomlieAlgebra *algebra,
                                              bool *passed,
                                              char **report_json);

// Structure-constant JSON document of an algebra.
enum HomlieStatus homlie_algebra_to_json(const struct HomlieAlgebra *algebra, char **out);

// LaTeX bracket table of an algebra.
enum HomlieStatus homlie_algebra_to_latex(const struct HomlieAlgebra *algebra, char **out);

// Dimensions of the derived series, as a JSON object
// `{"dims": [...], "solvable": bool}`, computed over the fraction field.
enum HomlieStatus homlie_algebra_derived_series(const struct HomlieAlgebra *algebra, char **out);

// The simplified Jackson presentation for `n` with symbolic `b`.
enum HomlieStatus homlie_presentation_jackson(uint32_t n, struct HomliePresentation **out);

// A presentation from its JSON document.
enum HomlieStatus homlie_presentation_from_json(const char *document,
                                                struct HomliePresentation **out);

// Release a presentation.  Null is ignored.
void homlie_presentation_free(struct HomliePresentation *presentation);

// JSON document of a presentation.
enum HomlieStatus homlie_presentation_to_json(const struct HomliePresentation *presentation,
                                              char **out);

// Normal form of an element written in the generator labels, e.g.
// `"e2*e1 - xi*e0"`.
enum HomlieStatus homlie_presentation_normal_form(const struct HomliePresentation *presentation,
                                                  const char *element,
                                                  char **out);

// Whether an element is central.
enum HomlieStatus homlie_presentation_is_central(const struct HomliePresentation *presentation,
                                                 const char *element,
                                                 bool *out);

// Overlap resolution up to `degree`; `*confluent` receives the verdict.
enum HomlieStatus homlie_presentation_confluent(const struct HomliePresentation *presentation,
                                                uint32_t degree,
                                                bool *confluent);

// Zeta element of the `n`-th Jackson fibre over the prime field `F_q`
// with `ξ = xi` (`0` selects the smallest residue of order `n`) and the
// integer `b`, truncated at `t^terms`, as the JSON body of a `zeta` report.
// Budgets come from the environment as for the command-line tool.
enum HomlieStatus homlie_zeta_jackson(uint32_t n,
                                      uint64_t q,
                                      uint64_t xi,
                                      int64_t b,
                                      uint32_t terms,
                                      char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMLIE_H */
