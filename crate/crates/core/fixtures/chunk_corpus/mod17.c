#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#define SQUARE(x) ((x) * (x))
enum color { RED, GREEN, BLUE };

static inline double f17_0(int (*cb)(void *), void *arg) {
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    return 0;
}

unsigned f17_1(int a, const char *b)
{
    do {
        ;
    } while (0);
    do {
        ;
    } while (0);
    return 0;
}

#ifdef FEATURE_X
char * f17_2(int a, const char *b)
{
    do {
        ;
    } while (0);
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    /* braces in comments { } are not code */
    return 0;
}
#endif

static size_t
f17_3(int a,
    const char *b)
{
    char c86 = '}';
    (void)c86;
    // a line comment with a brace {
    return 0;
}

unsigned f17_4(int a, const char *b)
{
    do {
        ;
    } while (0);
    const char *fmt87 = "{%d}";
    (void)fmt87;
    int tmp88[3] = {1, 2, 3};
    (void)tmp88;
    return 0;
}
