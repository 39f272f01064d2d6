#pragma once

#include <cstdint>
#include <vector>

#include "botd/grid.hpp"

namespace botd {

/// Pixel coordinates: x is the column, y the row. Pixel (j, i) has center (j + 0.5, i + 0.5).
struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Polygon {
    std::vector<Point2> vertices;
    friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct BoundingBox {
    double min_x, min_y, max_x, max_y;
};

/// Shoelace area, positive for counterclockwise order in (x, y) as given.
double signed_area(const Polygon& poly);
std::size_t distinct_vertex_count(const Polygon& poly);
BoundingBox bounding_box(const Polygon& poly);
Polygon translated(const Polygon& poly, double dx, double dy);
Polygon scaled(const Polygon& poly, double factor);

/// Sub-rectangle of an image, in pixels.
struct PixelWindow {
    int x0 = 0, y0 = 0, width = 0, height = 0;
};

/// Smallest window (plus a one-pixel frame) of a width x height image that contains every
/// pixel rasterize_polygon can set; width 0 when the polygon misses the image.
PixelWindow polygon_window(const Polygon& poly, int width, int height);

/// Copies `window` of `mask` into a new mask of the window's size, and back.
BinaryMask crop(const BinaryMask& mask, const PixelWindow& window);
BinaryMask uncrop(const BinaryMask& part, const PixelWindow& window, int width, int height);

/// Pixel (i, j) is set iff its center lies inside `poly` under the nonzero winding rule.
/// Throws DegeneratePolygon for fewer than 3 distinct vertices or zero area.
BinaryMask rasterize_polygon(const Polygon& poly, int width, int height);

/// Exact Euclidean distance from each pixel center to the nearest background pixel
/// center. Everything outside the image counts as background.
DistanceField distance_transform(const BinaryMask& mask);

/// Squared form of distance_transform; exact integers.
Grid<std::int64_t> squared_distance_transform(const BinaryMask& mask);

/// Pixel center maximizing the distance transform, ties to smallest row then column.
Point2 find_center(const BinaryMask& mask);

/// Distance transform sampled at `center`, which must be a foreground pixel center.
double compute_pmd(const BinaryMask& mask, Point2 center);

/// Keeps pixels whose distance to the background is strictly greater than r.
BinaryMask erode_disk(const BinaryMask& mask, double r);

/// Sets pixels within distance r (inclusive) of a foreground pixel center.
/// Out-of-image positions are never foreground.
BinaryMask dilate_disk(const BinaryMask& mask, double r);

/// Foreground pixels with at least one background 4-neighbor.
BinaryMask outline(const BinaryMask& mask);

struct ComponentInfo {
    std::size_t area = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    int seed_x = 0, seed_y = 0;  // first pixel in raster order
};

/// 8-connected labelling. labels is 0 on background and 1..N on components, which are
/// numbered in raster order of their first pixel.
struct ComponentLabels {
    Grid<std::int32_t> labels;
    std::vector<ComponentInfo> components;
};

ComponentLabels label_components(const BinaryMask& mask);

/// One full-size mask per 8-connected component, ordered by first pixel (row, column).
std::vector<BinaryMask> connected_components(const BinaryMask& mask);

/// Outer boundary of a single 8-connected component, traced along pixel edges so that
/// rasterizing the result reproduces the component with holes filled. Vertices sit on
/// pixel corners, order is counterclockwise (positive signed_area). With `simplify`
/// only direction changes are emitted.
/// Throws NotSingleComponent for empty or multi-component masks.
Polygon trace_contour(const BinaryMask& mask, bool simplify = true);

/// Serial kernels kept as readable references for the parallel implementations.
namespace reference {

/// Per-pixel winding-number test, O(W * H * vertices).
BinaryMask rasterize_polygon(const Polygon& poly, int width, int height);

/// Separable exact EDT evaluated without the lower-envelope trick: column pass then a
/// direct minimum along each row, O(W * H * W).
Grid<std::int64_t> squared_distance_transform(const BinaryMask& mask);

BinaryMask erode_disk(const BinaryMask& mask, double r);
BinaryMask dilate_disk(const BinaryMask& mask, double r);

}  // namespace reference

}  // namespace botd
