#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

unsigned f02_0(int a, const char *b)
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
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    return 0;
}
