#ifndef TOY_SESSION_H
#define TOY_SESSION_H

struct session {
    int id;
    char name[16];
    struct session *next;
};

struct session *session_add(struct session *head, int id, const char *name);
struct session *session_close(struct session *head, int id);
int session_count(const struct session *head);

#endif
