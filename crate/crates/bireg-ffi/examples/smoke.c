#include "bireg.h"
#include <stdio.h>
#include <string.h>

int main(void) {
    BiregParams *params = NULL;
    if (bireg_params_new(4, 4, 1, 2, &params) != BIREG_STATUS_OK) return 1;
    char buf[32];
    size_t written = 0;
    if (bireg_count(params, 36, buf, sizeof buf, &written) != BIREG_STATUS_OK) return 2;
    if (strcmp(buf, "90") != 0) return 3;
    BiregGraph *g = NULL;
    if (bireg_sample_exact(params, 7, 0, &g) != BIREG_STATUS_OK) return 4;
    if (bireg_graph_edge_count(g) != 8) return 5;
    BiregGraph *prefix = NULL;
    if (bireg_graph_from_edge_list("4 4\n0 0\n", &prefix) != BIREG_STATUS_OK) return 6;
    if (bireg_conditional_edge_prob(params, prefix, 0, 1, buf, sizeof buf, &written) != BIREG_STATUS_OK) return 7;
    if (strcmp(buf, "1/21") != 0) return 8;
    bireg_graph_free(prefix);
    bireg_graph_free(g);
    bireg_params_free(params);
    printf("ffi smoke ok: count=90, p2=1/21\n");
    return 0;
}
