#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#define SQUARE(x) ((x) * (x))
enum color { RED, GREEN, BLUE };

static inline unsigned f01_0(int (*cb)(void *), void *arg) {
    int tmp10[3] = {1, 2, 3};
    (void)tmp10;
    return 0;
}

/* doc for f01_1 */
struct node * f01_1(void)
{
    do {
        ;
    } while (0);
    char c11 = '}';
    (void)c11;
    const char *fmt12 = "{%d}";
    (void)fmt12;
    int tmp13[3] = {1, 2, 3};
    (void)tmp13;
    /* braces in comments { } are not code */
    do {
        ;
    } while (0);
    return 0;
}
