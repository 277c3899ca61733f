#include <stdio.h>
#include <string.h>

#include "padic_frames.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    PfFrame *frame = NULL;
    CHECK(pf_frame_build(3, 1, "i:0", &frame) == PF_STATUS_OK);
    CHECK(pf_frame_wavelet_count(frame) == 2);

    PfReport report;
    CHECK(pf_frame_verify(frame, 5, 1e-9, 0, &report) == PF_STATUS_OK);
    CHECK(report.passed && report.parseval_max < 1e-9);

    char *json = pf_frame_to_json(frame);
    CHECK(json != NULL && strstr(json, "\"wavelets\"") != NULL);
    PfFrame *copy = NULL;
    CHECK(pf_frame_from_json(json, &copy) == PF_STATUS_OK);
    pf_string_free(json);
    CHECK(pf_frame_mask_len(copy) == 27);

    PfFrame *bad = NULL;
    CHECK(pf_frame_build(3, 1, "ii:0", &bad) == PF_STATUS_INFEASIBLE);
    CHECK(bad == NULL && strlen(pf_last_error()) > 0);

    pf_frame_free(copy);
    pf_frame_free(frame);
    puts("ok");
    return 0;
}
