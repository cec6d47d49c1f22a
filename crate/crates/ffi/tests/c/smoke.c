#include <math.h>
#include <stdio.h>
#include <string.h>

#include "ndwu.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,    \
                    __LINE__, #cond);                                 \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    NdwuBehavior *pr = NULL;
    CHECK(ndwu_behavior_named("pr", &pr) == NDWU_STATUS_OK);
    double chsh = 0.0;
    CHECK(ndwu_behavior_chsh(pr, &chsh) == NDWU_STATUS_OK);
    CHECK(fabs(chsh - 4.0) < 1e-12);

    NdwuCriterionReport report;
    CHECK(ndwu_criterion(pr, &report) == NDWU_STATUS_OK);
    CHECK(!report.overall);
    ndwu_behavior_free(pr);

    NdwuBehavior *aqc = NULL;
    CHECK(ndwu_behavior_aqc(false, &aqc) == NDWU_STATUS_OK);
    CHECK(ndwu_criterion(aqc, &report) == NDWU_STATUS_OK);
    CHECK(!report.side_a.satisfied);
    CHECK(fabs(report.side_a.max_lhs - 0.4407179207639469) < 1e-12);
    bool npa = false;
    CHECK(ndwu_npa_tlm(aqc, &npa) == NDWU_STATUS_OK);
    CHECK(npa);
    ndwu_behavior_free(aqc);

    double p[16];
    for (int i = 0; i < 16; i++) p[i] = 0.25;
    p[0] = 0.3;
    NdwuBehavior *bad = NULL;
    CHECK(ndwu_behavior_new(p, 16, 1e-9, &bad) == NDWU_STATUS_INVALID_BEHAVIOR);
    CHECK(bad == NULL);
    CHECK(ndwu_last_error_message() != NULL);

    bool inside = false;
    CHECK(ndwu_family_boundary(0.5, 0.0, 0.2, &inside) == NDWU_STATUS_OK);
    CHECK(inside);
    CHECK(ndwu_family_boundary(0.6, 0.6, 0.0, &inside) == NDWU_STATUS_OUTSIDE_FAMILY);

    double lo = 0.0, hi = 0.0;
    CHECK(ndwu_c_interval(0.0, 0.0, &lo, &hi) == NDWU_STATUS_OK);
    CHECK(lo == -1.0 && hi == 1.0);
    CHECK(strcmp(ndwu_status_message(NDWU_STATUS_OK), "ok") == 0);
    printf("ok\n");
    return 0;
}
