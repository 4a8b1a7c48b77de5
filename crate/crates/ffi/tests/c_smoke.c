#include <stdio.h>
#include <string.h>
#include "repgrowth.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    RgGroup *g = NULL;
    CHECK(rg_group_new_named("s3", &g) == RG_STATUS_OK);
    char *z = NULL;
    CHECK(rg_group_zeta(g, 2, 1, &z) == RG_STATUS_OK);
    CHECK(strcmp(z, "9/4") == 0);
    rg_string_free(z);
    rg_group_free(g);

    CHECK(rg_group_new_named("bogus", &g) == RG_STATUS_INVALID_ARGUMENT);
    CHECK(rg_last_error_message() != NULL);

    uint64_t bound = 0;
    CHECK(rg_bound_root("e8", &bound) == RG_STATUS_OK && bound == 745);

    char *count = NULL;
    CHECK(rg_pointcount("edge", 2, "zmod:2^1", 1000000, &count) == RG_STATUS_OK);
    CHECK(strcmp(count, "10") == 0);
    rg_string_free(count);

    printf("ok %s\n", rg_version());
    return 0;
}
