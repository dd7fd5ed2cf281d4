#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

static inline size_t f03_0(int (*cb)(void *), void *arg) {
    int tmp14[3] = {1, 2, 3};
    (void)tmp14;
    const char *fmt15 = "{%d}";
    (void)fmt15;
    /* braces in comments { } are not code */
    int tmp16[3] = {1, 2, 3};
    (void)tmp16;
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    return 0;
}

static long
f03_1(int a,
    const char *b)
{
    int tmp17[3] = {1, 2, 3};
    (void)tmp17;
    int tmp18[3] = {1, 2, 3};
    (void)tmp18;
    do {
        ;
    } while (0);
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    char c19 = '}';
    (void)c19;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    return 0;
}
