#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

/* doc for f06_0 */
unsigned f06_0(void)
{
    /* braces in comments { } are not code */
    /* braces in comments { } are not code */
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    return 0;
}

static inline struct node * f06_1(int (*cb)(void *), void *arg) {
    /* braces in comments { } are not code */
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    int tmp30[3] = {1, 2, 3};
    (void)tmp30;
    return 0;
}

/* doc for f06_2 */
long f06_2(void)
{
    const char *fmt31 = "{%d}";
    (void)fmt31;
    char c32 = '}';
    (void)c32;
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    const char *fmt33 = "{%d}";
    (void)fmt33;
    do {
        ;
    } while (0);
    return 0;
}

void f06_3(int a, const char *b)
{
    do {
        ;
    } while (0);
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    int tmp34[3] = {1, 2, 3};
    (void)tmp34;
}

static unsigned
f06_4(int a,
    const char *b)
{
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    const char *fmt35 = "{%d}";
    (void)fmt35;
    /* braces in comments { } are not code */
    char c36 = '}';
    (void)c36;
    // a line comment with a brace {
    int tmp37[3] = {1, 2, 3};
    (void)tmp37;
    return 0;
}
