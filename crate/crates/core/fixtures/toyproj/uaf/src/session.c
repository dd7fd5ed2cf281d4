#include <stdlib.h>
#include <string.h>

#include "session.h"

struct session *session_add(struct session *head, int id, const char *name)
{
    struct session *s = calloc(1, sizeof(*s));

    if (!s)
        return head;
    s->id = id;
    strncpy(s->name, name, sizeof(s->name) - 1);
    s->next = head;
    return s;
}

struct session *session_close(struct session *head, int id)
{
    struct session **link = &head;

    while (*link) {
        struct session *cur = *link;
        if (cur->id == id) {
            free(cur);
            *link = cur->next;
            continue;
        }
        link = &cur->next;
    }
    return head;
}

int session_count(const struct session *head)
{
    int n = 0;

    for (; head; head = head->next)
        n++;
    return n;
}
