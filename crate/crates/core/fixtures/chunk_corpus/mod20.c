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

char * f20_0(int a, const char *b)
{
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    /* braces in comments { } are not code */
    do {
        ;
    } while (0);
    return 0;
}

double f20_1(int a, const char *b)
{
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    return 0;
}
