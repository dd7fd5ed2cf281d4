#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

/* doc for f08_0 */
void f08_0(void)
{
    char c46 = '}';
    (void)c46;
    /* braces in comments { } are not code */
}

static unsigned
f08_1(int a,
    const char *b)
{
    char c47 = '}';
    (void)c47;
    do {
        ;
    } while (0);
    return 0;
}
