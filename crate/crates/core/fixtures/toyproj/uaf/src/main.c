#include <stdio.h>

#include "session.h"

int main(int argc, char **argv)
{
    struct session *head = NULL;
    FILE *f;
    int op, id;

    if (argc < 2)
        return 2;
    f = fopen(argv[1], "r");
    if (!f)
        return 2;
    while (fscanf(f, "%d %d", &op, &id) == 2) {
        if (op == 1)
            head = session_add(head, id, "client");
        else
            head = session_close(head, id);
    }
    fclose(f);
    printf("%d sessions\n", session_count(head));
    while (head)
        head = session_close(head, head->id);
    return 0;
}
