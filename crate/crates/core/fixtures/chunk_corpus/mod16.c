#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

/* doc for f16_0 */
struct node * f16_0(void)
{
    do {
        ;
    } while (0);
    char c81 = '}';
    (void)c81;
    int tmp82[3] = {1, 2, 3};
    (void)tmp82;
    return 0;
}

/* doc for f16_1 */
int f16_1(void)
{
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    char c83 = '}';
    (void)c83;
    char c84 = '}';
    (void)c84;
    /* braces in comments { } are not code */
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    return 0;
}

static void
f16_2(int a,
    const char *b)
{
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    /* braces in comments { } are not code */
    char c85 = '}';
    (void)c85;
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    /* braces in comments { } are not code */
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
}
