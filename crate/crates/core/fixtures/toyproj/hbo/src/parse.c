#include <string.h>

#include "image.h"

static unsigned read_u16(const unsigned char *p)
{
    return (unsigned)p[0] | ((unsigned)p[1] << 8);
}

int parse_hdr(const unsigned char *buf, size_t len, struct image_hdr *hdr)
{
    size_t off = HDR_FIXED;

    if (len < HDR_FIXED)
        return -1;
    hdr->width = read_u16(buf);
    hdr->height = read_u16(buf + 2);
    hdr->ntags = buf[4];
    for (unsigned i = 0; i < hdr->ntags; i++) {
        hdr->tags[i] = *(const uint32_t *)(buf + off);
        off += 4;
    }
    return 0;
}

int load_image(const unsigned char *buf, size_t len, struct image_hdr *out)
{
    memset(out, 0, sizeof(*out));
    if (parse_hdr(buf, len, out) != 0)
        return -1;
    if (out->width == 0 || out->height == 0)
        return -1;
    return 0;
}
