#include <algorithm>
#include <cmath>
#include <vector>

#include "botd/geometry.hpp"
#include "kernels.hpp"

namespace botd {

namespace {

void validate(const Polygon& poly, int width, int height)
{
    if (width <= 0 || height <= 0)
        throw InvalidArgument("raster dimensions must be positive");
    for (const auto& p : poly.vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidArgument("polygon vertex is not finite");
    if (distinct_vertex_count(poly) < 3 || std::abs(signed_area(poly)) < 1e-12)
        throw DegeneratePolygon();
}

struct Crossing {
    double x;
    int dir;
};

}  // namespace

BinaryMask rasterize_polygon(const Polygon& poly, int width, int height)
{
    validate(poly, width, height);
    BinaryMask mask(width, height);
    const auto& v = poly.vertices;
    const std::size_t n = v.size();

#pragma omp parallel
    {
        std::vector<Crossing> crossings;
#pragma omp for schedule(static)
        for (int i = 0; i < height; ++i) {
            const double y = i + 0.5;
            crossings.clear();
            for (std::size_t k = 0; k < n; ++k) {
                const Point2& a = v[k];
                const Point2& b = v[(k + 1) % n];
                int dir = 0;
                if (a.y <= y && b.y > y)
                    dir = 1;
                else if (b.y <= y && a.y > y)
                    dir = -1;
                if (dir == 0)
                    continue;
                const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
                crossings.push_back({x, dir});
            }
            if (crossings.empty())
                continue;
            std::sort(crossings.begin(), crossings.end(),
                      [](const Crossing& l, const Crossing& r) { return l.x < r.x; });

            // winding(px) = sum of dir over crossings strictly right of px
            int winding = 0;
            for (const auto& c : crossings)
                winding += c.dir;
            std::size_t next = 0;
            auto row = mask.row(i);
            for (int j = 0; j < width; ++j) {
                const double px = j + 0.5;
                while (next < crossings.size() && crossings[next].x <= px)
                    winding -= crossings[next++].dir;
                if (next == crossings.size())
                    break;
                row[j] = winding != 0;
            }
        }
    }
    return mask;
}

namespace reference {

BinaryMask rasterize_polygon(const Polygon& poly, int width, int height)
{
    validate(poly, width, height);
    BinaryMask mask(width, height);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j)
            mask.set(j, i, detail::winding_number(poly.vertices, j + 0.5, i + 0.5) != 0);
    return mask;
}

}  // namespace reference

}  // namespace botd
