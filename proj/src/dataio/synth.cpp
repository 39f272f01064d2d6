#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>

#include "botd/dataio.hpp"

namespace botd {

namespace {

constexpr double kMinInradius = 8.0;
constexpr int kUnitGap = 2;

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(seed * 0x9E3779B97F4A7C15ULL + stream * 0xD1B54A32D192ED03ULL + 1) {}

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    int integer(int lo, int hi)  // inclusive
    {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

Polygon normalized(std::vector<Point2> pts)
{
    Polygon poly{std::move(pts)};
    for (auto& p : poly.vertices) {
        p.x = std::round(p.x);
        p.y = std::round(p.y);
    }
    const auto box = bounding_box(poly);
    poly = translated(poly, -box.min_x, -box.min_y);
    if (signed_area(poly) < 0)
        std::reverse(poly.vertices.begin(), poly.vertices.end());
    return poly;
}

double cross(const Point2& o, const Point2& a, const Point2& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point2> convex_hull(std::vector<Point2> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return pts;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0)
            --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool thick_enough(const Polygon& poly)
{
    const auto box = bounding_box(poly);
    const auto mask = rasterize_polygon(poly, static_cast<int>(box.max_x) + 1, static_cast<int>(box.max_y) + 1);
    if (!mask.any())
        return false;
    return compute_pmd(mask, find_center(mask)) >= kMinInradius;
}

Polygon make_square(Rng& rng, int extent)
{
    const int side = rng.integer(16, std::min(extent, 160));
    return normalized({{0, 0}, {double(side), 0}, {double(side), double(side)}, {0, double(side)}});
}

Polygon make_disk(Rng& rng, int extent)
{
    const double radius = rng.uniform(12.0, std::min(extent / 2.0 - 1.0, 96.0));
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi / 32.0);
    std::vector<Point2> pts;
    for (int k = 0; k < 32; ++k) {
        const double a = phase + 2.0 * std::numbers::pi * k / 32.0;
        pts.push_back({radius + 1.0 + radius * std::cos(a), radius + 1.0 + radius * std::sin(a)});
    }
    return normalized(std::move(pts));
}

constexpr int kMaxAttempts = 1000;

[[noreturn]] void cannot_fit()
{
    throw InvalidArgument("cannot fit a synthetic instance of inradius 8 px in the available cell");
}

Polygon make_convex(Rng& rng, int extent)
{
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double radius = rng.uniform(20.0, std::min(extent / 2.0 - 1.0, 120.0));
        const double aspect = rng.uniform(0.5, 1.0);
        const double tilt = rng.uniform(0.0, std::numbers::pi);
        const int n = rng.integer(8, 16);
        std::vector<Point2> pts;
        for (int k = 0; k < n; ++k) {
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double r = radius * rng.uniform(0.7, 1.0);
            const double lx = r * std::cos(a);
            const double ly = aspect * r * std::sin(a);
            pts.push_back({radius + lx * std::cos(tilt) - ly * std::sin(tilt),
                           radius + lx * std::sin(tilt) + ly * std::cos(tilt)});
        }
        for (auto& p : pts) {
            p.x = std::round(p.x);
            p.y = std::round(p.y);
        }
        auto hull = convex_hull(std::move(pts));
        if (hull.size() < 3)
            continue;
        auto poly = normalized(std::move(hull));
        if (thick_enough(poly))
            return poly;
    }
    cannot_fit();
}

// Two concentric arcs joined at their ends: 7 outer points, then 7 inner points back.
Polygon make_ribbon(Rng& rng, int extent)
{
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double max_thickness = std::min(40.0, extent / 4.0);
        const double thickness = rng.uniform(18.0, std::max(18.0, max_thickness));
        const double outer_cap = extent / 2.0 - 1.0;
        const double inner =
            rng.uniform(1.5 * thickness, std::max(1.5 * thickness, std::min(5.0 * thickness, outer_cap - thickness)));
        const double span = rng.uniform(50.0, 140.0) * std::numbers::pi / 180.0;
        const double start = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double outer = inner + thickness;
        std::vector<Point2> pts;
        for (int k = 0; k < 7; ++k) {
            const double a = start + span * k / 6.0;
            pts.push_back({outer * std::cos(a), outer * std::sin(a)});
        }
        for (int k = 6; k >= 0; --k) {
            const double a = start + span * k / 6.0;
            pts.push_back({inner * std::cos(a), inner * std::sin(a)});
        }
        auto poly = normalized(std::move(pts));
        const auto box = bounding_box(poly);
        if (box.max_x <= extent && box.max_y <= extent && thick_enough(poly))
            return poly;
    }
    cannot_fit();
}

Polygon make_shape(Rng& rng, SynthKind kind, int extent)
{
    switch (kind) {
    case SynthKind::squares:
        return make_square(rng, extent);
    case SynthKind::disks:
        return make_disk(rng, extent);
    case SynthKind::convex:
        return make_convex(rng, extent);
    case SynthKind::ribbons:
        return make_ribbon(rng, extent);
    }
    throw InvalidArgument("unknown synthetic kind");
}

}  // namespace

SynthKind parse_synth_kind(std::string_view name)
{
    if (name == "squares")
        return SynthKind::squares;
    if (name == "disks")
        return SynthKind::disks;
    if (name == "convex")
        return SynthKind::convex;
    if (name == "ribbons")
        return SynthKind::ribbons;
    throw InvalidArgument("unknown synthetic kind: " + std::string(name));
}

std::string_view synth_kind_name(SynthKind kind)
{
    switch (kind) {
    case SynthKind::squares:
        return "squares";
    case SynthKind::disks:
        return "disks";
    case SynthKind::convex:
        return "convex";
    case SynthKind::ribbons:
        return "ribbons";
    }
    return "unknown";
}

std::vector<AnnotatedImage> synth_dataset(const SynthOptions& options)
{
    if (options.count < 1 || options.instances_per_image < 1)
        throw InvalidArgument("synthetic dataset needs at least one image and one instance");

    // Instances (or adhesion pairs) each own one cell of a g x g grid, so distinct
    // cells never come closer than the cell padding.
    const std::size_t units =
        options.adhesion_pairs ? (options.instances_per_image + 1) / 2 : options.instances_per_image;
    const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(units))));
    const int cell = options.size / grid;
    const int extent = cell - 2 * kUnitGap;
    const int pair_extent = (extent - kUnitGap) / 2;
    if ((options.adhesion_pairs ? pair_extent : extent) < 34)
        throw InvalidArgument("image too small for the requested number of instances");

    std::vector<AnnotatedImage> images;
    images.reserve(options.count);
    for (std::size_t index = 0; index < options.count; ++index) {
        Rng rng(options.seed, index);
        AnnotatedImage image;
        char name[32];
        std::snprintf(name, sizeof name, "img_%04zu", index);
        image.name = name;
        image.width = options.size;
        image.height = options.size;

        std::size_t remaining = options.instances_per_image;
        for (std::size_t unit = 0; unit < units; ++unit) {
            const int cx = static_cast<int>(unit % grid) * cell + kUnitGap;
            const int cy = static_cast<int>(unit / grid) * cell + kUnitGap;
            std::vector<Polygon> shapes;
            if (options.adhesion_pairs && remaining >= 2) {
                auto first = make_shape(rng, options.kind, pair_extent);
                auto second = make_shape(rng, options.kind, pair_extent);
                const auto first_box = bounding_box(first);
                second = translated(second, 0.0, first_box.max_y + kUnitGap);
                shapes = {std::move(first), std::move(second)};
            } else {
                shapes = {make_shape(rng, options.kind, extent)};
            }
            double w = 0.0, h = 0.0;
            for (const auto& s : shapes) {
                const auto box = bounding_box(s);
                w = std::max(w, box.max_x);
                h = std::max(h, box.max_y);
            }
            const int ox = cx + rng.integer(0, std::max(0, extent - static_cast<int>(w)));
            const int oy = cy + rng.integer(0, std::max(0, extent - static_cast<int>(h)));
            for (auto& s : shapes) {
                TextInstanceAnnotation ann;
                ann.polygon = translated(s, ox, oy);
                ann.care = true;
                image.instances.push_back(std::move(ann));
                --remaining;
            }
        }
        images.push_back(std::move(image));
    }
    return images;
}

}  // namespace botd
