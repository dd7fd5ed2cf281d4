#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

static const int table[] = {
    0, 0, 0,
    1, 2, 3,
    2, 4, 6,
    3, 6, 9,
    4, 8, 12,
    5, 10, 15,
    6, 12, 18,
    7, 14, 21,
    8, 16, 24,
    9, 18, 27,
    10, 20, 30,
    11, 22, 33,
    12, 24, 36,
    13, 26, 39,
    14, 28, 42,
    15, 30, 45,
    16, 32, 48,
    17, 34, 51,
    18, 36, 54,
    19, 38, 57,
    20, 40, 60,
    21, 42, 63,
    22, 44, 66,
    23, 46, 69,
    24, 48, 72,
    25, 50, 75,
    26, 52, 78,
    27, 54, 81,
    28, 56, 84,
    29, 58, 87,
    30, 60, 90,
    31, 62, 93,
    32, 64, 96,
    33, 66, 99,
    34, 68, 102,
    35, 70, 105,
    36, 72, 108,
    37, 74, 111,
    38, 76, 114,
    39, 78, 117,
};

#define SQUARE(x) ((x) * (x))
enum color { RED, GREEN, BLUE };

static inline char * f05_0(int (*cb)(void *), void *arg) {
    /* braces in comments { } are not code */
    int tmp24[3] = {1, 2, 3};
    (void)tmp24;
    char c25 = '}';
    (void)c25;
    /* braces in comments { } are not code */
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    const char *fmt26 = "{%d}";
    (void)fmt26;
    return 0;
}

/* doc for f05_1 */
void f05_1(void)
{
    do {
        ;
    } while (0);
    const char *fmt27 = "{%d}";
    (void)fmt27;
}

long f05_2(int a, const char *b)
{
    char c28 = '}';
    (void)c28;
    do {
        ;
    } while (0);
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
    do {
        ;
    } while (0);
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    return 0;
}

static unsigned
f05_3(int a,
    const char *b)
{
    int tmp29[3] = {1, 2, 3};
    (void)tmp29;
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
    /* braces in comments { } are not code */
    /* braces in comments { } are not code */
    return 0;
}

static long
f05_4(int a,
    const char *b)
{
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
