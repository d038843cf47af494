#include <stdio.h>
#include "hstrn.h"

int main(void) {
    HstrnShadowing sh;
    if (hstrn_shadowing_preset(2, &sh) != HSTRN_STATUS_OK) return 10;
    HstrnConfigParams p = {
        .sr = {sh.p_s, sh.m_s, sh.xi_s, 10.0},
        .user = {2.0, 1.0, 10.0},
        .eve = {2.0, 1.0, 0.1},
        .n = 2, .p = 2, .q = 2, .phi_c = 0.5, .terms = 0,
    };
    HstrnConfig *cfg = NULL;
    if (hstrn_config_new(&p, &cfg) != HSTRN_STATUS_OK) return 11;
    HstrnMetric m;
    if (hstrn_sopm(cfg, HSTRN_METHOD_QUADRATURE, &m) != HSTRN_STATUS_OK) return 12;
    printf("%.6f\n", m.value);
    p.n = 0;
    HstrnConfig *bad = NULL;
    int rc = hstrn_config_new(&p, &bad) == HSTRN_STATUS_INVALID_PARAM && bad == NULL ? 0 : 13;
    hstrn_config_free(cfg);
    return rc;
}
