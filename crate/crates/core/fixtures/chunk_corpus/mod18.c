#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

/* doc for f18_0 */
unsigned f18_0(void)
{
    char c89 = '}';
    (void)c89;
    char c90 = '}';
    (void)c90;
    int tmp91[3] = {1, 2, 3};
    (void)tmp91;
    return 0;
}

static struct node *
f18_1(int a,
    const char *b)
{
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    int tmp92[3] = {1, 2, 3};
    (void)tmp92;
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    char c93 = '}';
    (void)c93;
    return 0;
}
