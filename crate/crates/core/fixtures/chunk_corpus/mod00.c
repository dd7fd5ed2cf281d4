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

double f00_0(int a, const char *b)
{
    int tmp1[3] = {1, 2, 3};
    (void)tmp1;
    do {
        ;
    } while (0);
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    return 0;
}

static inline struct node * f00_1(int (*cb)(void *), void *arg) {
    char c2 = '}';
    (void)c2;
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
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    const char *fmt3 = "{%d}";
    (void)fmt3;
    return 0;
}

#ifdef FEATURE_X
char * f00_2(int a, const char *b)
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
    const char *fmt4 = "{%d}";
    (void)fmt4;
    const char *fmt5 = "{%d}";
    (void)fmt5;
    // a line comment with a brace {
    int tmp6[3] = {1, 2, 3};
    (void)tmp6;
    return 0;
}
#endif

static inline unsigned f00_3(int (*cb)(void *), void *arg) {
    // a line comment with a brace {
    char c7 = '}';
    (void)c7;
    int tmp8[3] = {1, 2, 3};
    (void)tmp8;
    int tmp9[3] = {1, 2, 3};
    (void)tmp9;
    return 0;
}
