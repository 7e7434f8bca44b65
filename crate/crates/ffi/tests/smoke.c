#include <math.h>
#include <stdio.h>
#include "lame_susy.h"

int main(void) {
    LsSolution *sol = NULL;
    if (ls_solution_new(3, 2, 0.9, 8.0, &sol) != LS_STATUS_OK) {
        fprintf(stderr, "solve: %s\n", ls_last_error());
        return 1;
    }
    double re = 0.0, im = 0.0;
    if (ls_solution_evaluate(sol, 1, 0.0, &re, &im) != LS_STATUS_OK || fabs(re - 1.0) > 1e-12) return 2;
    ls_solution_free(sol);

    LsSeed seed = {8.0, 0.0, 1};
    LsPartner *p = NULL;
    if (ls_partner_new(3, 2, 0.9, &seed, 1, &p) != LS_STATUS_OK) return 3;
    double v = 0.0;
    if (ls_partner_value(p, 0.3, &v) != LS_STATUS_OK) return 4;
    ls_partner_free(p);

    seed.energy = 8.1;
    if (ls_partner_new(3, 2, 0.9, &seed, 1, &p) != LS_STATUS_DOMAIN) return 5;
    printf("ok %s %.6f\n", ls_version(), v);
    return 0;
}
