#ifndef TOY_IMAGE_H
#define TOY_IMAGE_H

#include <stddef.h>
#include <stdint.h>

#define HDR_FIXED 5
#define MAX_TAGS 16

struct image_hdr {
    unsigned width;
    unsigned height;
    unsigned ntags;
    uint32_t tags[MAX_TAGS];
};

int parse_hdr(const unsigned char *buf, size_t len, struct image_hdr *hdr);
int load_image(const unsigned char *buf, size_t len, struct image_hdr *out);
unsigned char *read_file(const char *path, size_t *len);

#endif
