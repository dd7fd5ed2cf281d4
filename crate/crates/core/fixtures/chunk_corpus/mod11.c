#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

/* doc for f11_0 */
struct node * f11_0(void)
{
    char c61 = '}';
    (void)c61;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    int tmp62[3] = {1, 2, 3};
    (void)tmp62;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    const char *fmt63 = "{%d}";
    (void)fmt63;
    return 0;
}

static inline struct node * f11_1(int (*cb)(void *), void *arg) {
    const char *fmt64 = "{%d}";
    (void)fmt64;
    /* braces in comments { } are not code */
    return 0;
}

/* doc for f11_2 */
double f11_2(void)
{
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    /* braces in comments { } are not code */
    const char *fmt65 = "{%d}";
    (void)fmt65;
    /* braces in comments { } are not code */
    /* braces in comments { } are not code */
    char c66 = '}';
    (void)c66;
    return 0;
}

#ifdef FEATURE_X
long f11_3(int a, const char *b)
{
    int tmp67[3] = {1, 2, 3};
    (void)tmp67;
    return 0;
}
#endif
