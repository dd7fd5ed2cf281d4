#include <cstdio>

struct Shape { virtual ~Shape() {} virtual int area() const { return 0; } };
struct Square : Shape { int side = 3; int area() const override { return side * side; } };
struct Circle : Shape { int r = 2; };

static int square_area(Shape *s)
{
    Square *sq = static_cast<Square *>(s);
    return sq->area();
}

int main()
{
    Circle c;
    std::printf("%d\n", square_area(&c));
    return 0;
}
