#include <math.h>
#include <stdio.h>
#include <string.h>

#include "gmhd.h"

#define CHECK(c)                                                  \
  do {                                                            \
    if (!(c)) {                                                   \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #c); \
      return 1;                                                   \
    }                                                             \
  } while (0)

int main(void) {
  GmhdParams *p = NULL;
  CHECK(gmhd_params_derive(1.0, 1.0, 0.1, 2, NAN, &p) == GMHD_STATUS_OK);
  GmhdParamValues v;
  CHECK(gmhd_params_values(p, &v) == GMHD_STATUS_OK);
  CHECK(v.r == 2 && v.k_base >= 1);
  double b = 0.0;
  CHECK(gmhd_b10_besov(p, v.t_final, 1.0, &b) == GMHD_STATUS_OK && b > 0.0);
  gmhd_params_free(p);

  CHECK(gmhd_params_derive(1.0, 1.0, 0.1, 2, NAN, NULL) == GMHD_STATUS_NULL_POINTER);
  CHECK(gmhd_last_error() != NULL);

  GmhdReport *rep = NULL;
  CHECK(gmhd_run("{\"analytic_only\": true}", &rep) == GMHD_STATUS_OK);
  CHECK(gmhd_report_index_count(rep) == 1);
  double s, bi, bf, f;
  CHECK(gmhd_report_index(rep, 0, &s, &bi, &bf, &f) == GMHD_STATUS_OK);
  CHECK(s == 1.0 && bi > 0.0 && bf > 0.0);
  CHECK(strstr(gmhd_report_json(rep), "\"indices\"") != NULL);
  gmhd_report_free(rep);

  printf("gmhd %s ok\n", gmhd_version());
  return 0;
}
