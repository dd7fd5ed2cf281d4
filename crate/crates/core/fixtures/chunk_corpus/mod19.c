#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#ifdef FEATURE_X
unsigned f19_0(int a, const char *b)
{
    do {
        ;
    } while (0);
    // a line comment with a brace {
    return 0;
}
#endif
