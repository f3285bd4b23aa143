/* Fits two images, normalizes one of them and prints the result.
 *
 *   cargo build -p stainforge-ffi
 *   cc crates/ffi/c/smoke.c -Icrates/ffi/include target/debug/libstainforge_ffi.a -lm -lpthread -ldl -o smoke
 */
#include <stdio.h>
#include <string.h>

#include "stainforge.h"

#define W 4
#define H 4

static int check(SfStatus s, const char *what) {
    if (s != SF_STATUS_OK) {
        fprintf(stderr, "%s: %s (%s)\n", what, sf_status_message(s), sf_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    uint8_t a[W * H * 3], b[W * H * 3], out[W * H * 3];
    for (int i = 0; i < W * H * 3; i++) {
        a[i] = (uint8_t)(120 + (i * 7) % 60);
        b[i] = (uint8_t)(90 + (i * 11) % 80);
    }
    const uint8_t *pixels[2] = {a, b};
    uint32_t widths[2] = {W, W}, heights[2] = {H, H};
    SfColorSpace spaces[3] = {SF_COLOR_SPACE_LAB, SF_COLOR_SPACE_HSV, SF_COLOR_SPACE_HED};

    SfStats *stats = NULL;
    SfPipeline *pipe = NULL;
    if (check(sf_stats_fit(pixels, widths, heights, 2, spaces, 3, "gaussian", &stats), "fit")) return 1;
    if (check(sf_pipeline_new(SF_MODE_RAND_STAIN_NA, SF_COLOR_SPACE_LAB, SF_STRENGTH_LIGHT, stats, 42, &pipe), "pipeline")) return 1;
    double clamped = 0.0;
    if (check(sf_transform(pipe, a, W, H, 0, out, sizeof out, &clamped), "transform")) return 1;

    char *text = NULL;
    if (check(sf_stats_to_string(stats, &text), "serialize")) return 1;
    printf("stainforge %s\nfirst pixel %u %u %u, clamped %.3f\n%zu bytes of stats\n", sf_version(), out[0], out[1],
           out[2], clamped, strlen(text));
    sf_string_free(text);
    sf_pipeline_free(pipe);
    sf_stats_free(stats);
    return 0;
}
