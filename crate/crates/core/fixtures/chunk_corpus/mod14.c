#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

static inline long f14_0(int (*cb)(void *), void *arg) {
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    const char *fmt77 = "{%d}";
    (void)fmt77;
    int tmp78[3] = {1, 2, 3};
    (void)tmp78;
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    int tmp79[3] = {1, 2, 3};
    (void)tmp79;
    return 0;
}
