#include <stddef.h>

struct node { int value; struct node *next; };

static int second_value(const struct node *n)
{
    return n->next->value;
}

int main(void)
{
    struct node only = { 1, NULL };
    return second_value(&only);
}
