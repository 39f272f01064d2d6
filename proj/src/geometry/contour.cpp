#include <array>

#include "botd/geometry.hpp"

namespace botd {

namespace {

// Headings in image coordinates (y down): east, south, west, north.
// Turning right is +1, left is +3 (mod 4).
constexpr std::array<int, 4> kDx{1, 0, -1, 0};
constexpr std::array<int, 4> kDy{0, 1, 0, -1};

// Pixel whose center is vertex + (d +/- r) / 2, with r the right-hand normal (-dy, dx).
bool pixel_ahead(const BinaryMask& mask, int vx, int vy, int heading, int side)
{
    const int dx = kDx[heading];
    const int dy = kDy[heading];
    const int cx2 = 2 * vx + dx + side * -dy;
    const int cy2 = 2 * vy + dy + side * dx;
    return mask.test((cx2 - 1) / 2, (cy2 - 1) / 2);
}

}  // namespace

Polygon trace_contour(const BinaryMask& mask, bool simplify)
{
    const auto labelled = label_components(mask);
    if (labelled.components.size() != 1)
        throw NotSingleComponent(labelled.components.size());

    // Top-left corner of the first pixel in raster order; the walk keeps the
    // component on its right, which yields positive shoelace area.
    const int sx = labelled.components[0].seed_x;
    const int sy = labelled.components[0].seed_y;
    constexpr int kEast = 0;

    Polygon poly;
    poly.vertices.push_back({static_cast<double>(sx), static_cast<double>(sy)});
    int vx = sx;
    int vy = sy;
    int heading = kEast;
    const long long max_steps = 4LL * (mask.width() + 1) * (mask.height() + 1) + 4;
    for (long long step = 0; step < max_steps; ++step) {
        vx += kDx[heading];
        vy += kDy[heading];
        int next;
        if (pixel_ahead(mask, vx, vy, heading, -1))
            next = (heading + 3) % 4;  // 8-connectivity: a diagonal neighbour pulls left
        else if (pixel_ahead(mask, vx, vy, heading, +1))
            next = heading;
        else
            next = (heading + 1) % 4;
        if (vx == sx && vy == sy && next == kEast)
            return poly;
        if (!simplify || next != heading)
            poly.vertices.push_back({static_cast<double>(vx), static_cast<double>(vy)});
        heading = next;
    }
    throw Error("contour trace did not close");
}

}  // namespace botd
