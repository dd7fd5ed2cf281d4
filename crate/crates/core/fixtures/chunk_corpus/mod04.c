#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

char * f04_0(int a, const char *b)
{
    do {
        ;
    } while (0);
    int tmp20[3] = {1, 2, 3};
    (void)tmp20;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    const char *fmt21 = "{%d}";
    (void)fmt21;
    const char *fmt22 = "{%d}";
    (void)fmt22;
    /* braces in comments { } are not code */
    return 0;
}

#ifdef FEATURE_X
double f04_1(int a, const char *b)
{
    /* braces in comments { } are not code */
    char c23 = '}';
    (void)c23;
    // a line comment with a brace {
    return 0;
}
#endif
