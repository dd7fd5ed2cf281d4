#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#define SQUARE(x) ((x) * (x))
enum color { RED, GREEN, BLUE };

static char *
f13_0(int a,
    const char *b)
{
    char c74 = '}';
    (void)c74;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    char c75 = '}';
    (void)c75;
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
    const char *fmt76 = "{%d}";
    (void)fmt76;
    return 0;
}

static inline long f13_1(int (*cb)(void *), void *arg) {
    do {
        ;
    } while (0);
    return 0;
}

#ifdef FEATURE_X
size_t f13_2(int a, const char *b)
{
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    return 0;
}
#endif
