/* Smoke test of the C interface: build, check, serialise and normalise. */
#include <stdio.h>
#include <string.h>

#include "homlie.h"

#define CHECK(call)                                                          \
  do {                                                                       \
    HomlieStatus s_ = (call);                                                \
    if (s_ != HOMLIE_STATUS_OK) {                                            \
      fprintf(stderr, "%s failed (%d): %s\n", #call, (int)s_,               \
              homlie_last_error_message());                                  \
      return 1;                                                              \
    }                                                                        \
  } while (0)

int main(void) {
  HomlieAlgebra *alg = NULL;
  CHECK(homlie_algebra_from_family("{\"family\":\"kummer-witt\",\"n\":3}", &alg));
  uintptr_t rank = 0;
  CHECK(homlie_algebra_rank(alg, &rank));
  bool passed = false;
  CHECK(homlie_algebra_check_axioms(alg, &passed, NULL));
  char *json = NULL;
  CHECK(homlie_algebra_to_json(alg, &json));
  HomlieAlgebra *copy = NULL;
  CHECK(homlie_algebra_from_json(json, &copy));
  homlie_string_free(json);

  HomliePresentation *pres = NULL;
  CHECK(homlie_presentation_jackson(3, &pres));
  char *nf = NULL;
  CHECK(homlie_presentation_normal_form(pres, "e2*e0", &nf));
  bool central = false;
  CHECK(homlie_presentation_is_central(pres, "e0^3", &central));

  HomlieAlgebra *bad = NULL;
  HomlieStatus s = homlie_algebra_from_family("{\"family\":\"nope\"}", &bad);

  printf("version=%s rank=%u passed=%d nf=%s central=%d bad=%d\n", homlie_version(),
         (unsigned)rank, (int)passed, nf, (int)central, (int)s);
  homlie_string_free(nf);
  homlie_presentation_free(pres);
  homlie_algebra_free(copy);
  homlie_algebra_free(alg);
  return (rank == 3 && passed && central && s == HOMLIE_STATUS_PARSE) ? 0 : 1;
}
