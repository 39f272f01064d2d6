#include <algorithm>
#include <cmath>

#include "botd/geometry.hpp"

namespace botd {

double signed_area(const Polygon& poly)
{
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3)
        return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

std::size_t distinct_vertex_count(const Polygon& poly)
{
    std::vector<Point2> pts = poly.vertices;
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    return static_cast<std::size_t>(std::unique(pts.begin(), pts.end()) - pts.begin());
}

BoundingBox bounding_box(const Polygon& poly)
{
    BoundingBox box{INFINITY, INFINITY, -INFINITY, -INFINITY};
    for (const auto& p : poly.vertices) {
        box.min_x = std::min(box.min_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_x = std::max(box.max_x, p.x);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

Polygon translated(const Polygon& poly, double dx, double dy)
{
    Polygon out = poly;
    for (auto& p : out.vertices) {
        p.x += dx;
        p.y += dy;
    }
    return out;
}

Polygon scaled(const Polygon& poly, double factor)
{
    Polygon out = poly;
    for (auto& p : out.vertices) {
        p.x *= factor;
        p.y *= factor;
    }
    return out;
}

PixelWindow polygon_window(const Polygon& poly, int width, int height)
{
    const auto box = bounding_box(poly);
    const double x0 = std::max(0.0, std::floor(box.min_x) - 1.0);
    const double y0 = std::max(0.0, std::floor(box.min_y) - 1.0);
    const double x1 = std::min(static_cast<double>(width), std::ceil(box.max_x) + 1.0);
    const double y1 = std::min(static_cast<double>(height), std::ceil(box.max_y) + 1.0);
    if (!(x1 > x0) || !(y1 > y0))
        return {};
    return {static_cast<int>(x0), static_cast<int>(y0), static_cast<int>(x1 - x0), static_cast<int>(y1 - y0)};
}

BinaryMask crop(const BinaryMask& mask, const PixelWindow& window)
{
    BinaryMask out(window.width, window.height);
    for (int y = 0; y < window.height; ++y)
        for (int x = 0; x < window.width; ++x)
            out(x, y) = mask.test(x + window.x0, y + window.y0);
    return out;
}

BinaryMask uncrop(const BinaryMask& part, const PixelWindow& window, int width, int height)
{
    BinaryMask out(width, height);
    for (int y = 0; y < part.height(); ++y)
        for (int x = 0; x < part.width(); ++x)
            if (part(x, y) && out.contains(x + window.x0, y + window.y0))
                out(x + window.x0, y + window.y0) = 1;
    return out;
}

}  // namespace botd
