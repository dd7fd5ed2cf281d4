#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#define SQUARE(x) ((x) * (x))
enum color { RED, GREEN, BLUE };

static inline void f09_0(int (*cb)(void *), void *arg) {
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    /* braces in comments { } are not code */
}

#ifdef FEATURE_X
void f09_1(int a, const char *b)
{
    const char *fmt48 = "{%d}";
    (void)fmt48;
    // a line comment with a brace {
    /* braces in comments { } are not code */
    do {
        ;
    } while (0);
}
#endif

/* doc for f09_2 */
size_t f09_2(void)
{
    do {
        ;
    } while (0);
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    char c49 = '}';
    (void)c49;
    /* braces in comments { } are not code */
    const char *fmt50 = "{%d}";
    (void)fmt50;
    return 0;
}

#ifdef FEATURE_X
size_t f09_3(int a, const char *b)
{
    const char *fmt51 = "{%d}";
    (void)fmt51;
    do {
        ;
    } while (0);
    const char *fmt52 = "{%d}";
    (void)fmt52;
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    char c53 = '}';
    (void)c53;
    return 0;
}
#endif
