#include <stdio.h>
#include <stdlib.h>

#include "image.h"

int main(int argc, char **argv)
{
    struct image_hdr hdr;
    unsigned char *buf;
    size_t len = 0;
    int rc;

    if (argc < 2) {
        fprintf(stderr, "usage: %s <image>\n", argv[0]);
        return 2;
    }
    buf = read_file(argv[1], &len);
    if (!buf)
        return 2;
    rc = load_image(buf, len, &hdr);
    if (rc == 0)
        printf("%ux%u, %u tags\n", hdr.width, hdr.height, hdr.ntags);
    else
        printf("invalid image\n");
    free(buf);
    return 0;
}
