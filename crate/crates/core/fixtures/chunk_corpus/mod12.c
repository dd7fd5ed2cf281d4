#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#ifdef FEATURE_X
char * f12_0(int a, const char *b)
{
    // a line comment with a brace {
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    do {
        ;
    } while (0);
    /* braces in comments { } are not code */
    // a line comment with a brace {
    int tmp68[3] = {1, 2, 3};
    (void)tmp68;
    return 0;
}
#endif

/* doc for f12_1 */
char * f12_1(void)
{
    char c69 = '}';
    (void)c69;
    /* braces in comments { } are not code */
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    int tmp70[3] = {1, 2, 3};
    (void)tmp70;
    // a line comment with a brace {
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    return 0;
}

static void
f12_2(int a,
    const char *b)
{
    char c71 = '}';
    (void)c71;
}

#ifdef FEATURE_X
unsigned f12_3(int a, const char *b)
{
    // a line comment with a brace {
    do {
        ;
    } while (0);
    const char *fmt72 = "{%d}";
    (void)fmt72;
    /* braces in comments { } are not code */
    /* braces in comments { } are not code */
    char c73 = '}';
    (void)c73;
    return 0;
}
#endif
