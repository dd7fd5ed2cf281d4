#include <stddef.h>
#include <string.h>

struct node {
    struct node *next;
    int key;
};

#define SQUARE(x) ((x) * (x))
enum color { RED, GREEN, BLUE };

/* doc for f21_0 */
double f21_0(void)
{
    switch (0) {
    case 0:
        break;
    default:
        break;
    }
    int tmp94[3] = {1, 2, 3};
    (void)tmp94;
    char c95 = '}';
    (void)c95;
    int tmp96[3] = {1, 2, 3};
    (void)tmp96;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    char c97 = '}';
    (void)c97;
    return 0;
}

int f21_1(int a, const char *b)
{
    do {
        ;
    } while (0);
    const char *fmt98 = "{%d}";
    (void)fmt98;
    for (int i = 0; i < 4; i++) {
        if (i == 2) {
            continue;
        }
    }
    return 0;
}
