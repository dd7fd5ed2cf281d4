#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

/* doc for f07_0 */
size_t f07_0(void)
{
    /* braces in comments { } are not code */
    const char *fmt38 = "{%d}";
    (void)fmt38;
    const char *fmt39 = "{%d}";
    (void)fmt39;
    // a line comment with a brace {
    /* braces in comments { } are not code */
    char c40 = '}';
    (void)c40;
    return 0;
}

int f07_1(int a, const char *b)
{
    do {
        ;
    } while (0);
    const char *fmt41 = "{%d}";
    (void)fmt41;
    char c42 = '}';
    (void)c42;
    const char *fmt43 = "{%d}";
    (void)fmt43;
    return 0;
}

double f07_2(int a, const char *b)
{
    const char *fmt44 = "{%d}";
    (void)fmt44;
    char c45 = '}';
    (void)c45;
    /* braces in comments { } are not code */
    do {
        ;
    } while (0);
    /* braces in comments { } are not code */
    return 0;
}
