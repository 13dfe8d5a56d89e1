#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include "virateich.h"

#define N 64

static int fail(const char *what, VtStatus s) {
    char msg[256];
    vt_last_error(msg, sizeof msg);
    fprintf(stderr, "%s: %s (%s)\n", what, vt_status_str(s), msg);
    return 1;
}

int main(void) {
    double a[N], s[N], u[N], t[N];
    for (int k = 0; k < N; k++) {
        a[k] = 1.0;
        s[k] = 0.0;
        u[k] = -0.25;
    }
    VtConnection *c = NULL;
    VtPotential *pot = NULL;
    VtStatus st = vt_connection_new(a, s, u, N, &c);
    if (st != VT_STATUS_OK) return fail("connection", st);
    st = vt_hill_from_asu(c, &pot);
    if (st != VT_STATUS_OK) return fail("from_asu", st);
    st = vt_potential_values(pot, t, N);
    if (st != VT_STATUS_OK) return fail("values", st);
    for (int k = 0; k < N; k++) {
        if (fabs(t[k] - 0.25) > 1e-10) return fail("disk potential", VT_STATUS_NUMERICAL);
    }

    double trace = 0.0;
    VtOrbitClass cls;
    for (int k = 0; k < N; k++) t[k] = -1.0;
    VtPotential *trumpet = NULL;
    vt_potential_new(t, N, &trumpet);
    st = vt_potential_monodromy(trumpet, NULL, &trace, &cls);
    if (st != VT_STATUS_OK) return fail("monodromy", st);
    if (fabs(trace - 2.0 * cosh(1.0)) > 1e-8 || cls != VT_ORBIT_CLASS_HYPERBOLIC) return fail("trace", VT_STATUS_NUMERICAL);

    a[3] = -1.0;
    VtConnection *bad = NULL;
    VtPotential *none = NULL;
    vt_connection_new(a, s, u, N, &bad);
    st = vt_hill_from_asu(bad, &none);
    if (st != VT_STATUS_PRECONDITION || none != NULL) return fail("expected precondition failure", st);
    if (vt_last_error(NULL, 0) == 0) return fail("empty error message", st);

    vt_connection_free(bad);
    vt_connection_free(c);
    vt_potential_free(pot);
    vt_potential_free(trumpet);
    puts("ok");
    return 0;
}
