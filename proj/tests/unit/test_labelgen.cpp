#include <doctest.h>

#include "botd/labelgen.hpp"
#include "oracles.hpp"

using namespace botd;

namespace {

// Composition of the public geometry operations on the full canvas.
InstanceLabel label_by_definition(const Polygon& poly, int w, int h, double s)
{
    const auto mask = rasterize_polygon(poly, w, h);
    InstanceLabel label;
    label.cm_scale = s;
    label.center = find_center(mask);
    label.pmd = compute_pmd(mask, label.center);
    const auto eroded = erode_disk(mask, (1.0 - s) * label.pmd);
    label.cm = BinaryMask(w, h);
    for (const auto& comp : connected_components(eroded))
        if (comp.test(static_cast<int>(label.center.x), static_cast<int>(label.center.y)))
            label.cm = comp;
    return label;
}

std::int64_t min_sq_gap(const BinaryMask& a, const BinaryMask& b)
{
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            if (a(x, y))
                for (int v = 0; v < b.height(); ++v)
                    for (int u = 0; u < b.width(); ++u)
                        if (b(u, v))
                            best = std::min<std::int64_t>(best, std::int64_t(u - x) * (u - x) + std::int64_t(v - y) * (v - y));
    return best;
}

}  // namespace

TEST_CASE("make_instance_label on an 80 px square")
{
    const auto square = oracle::rect(10, 10, 90, 90);

    const auto half = make_instance_label(square, 100, 100, 0.5);
    CHECK(half.pmd == 40.0);
    CHECK(half.center == Point2{49.5, 49.5});
    CHECK(half.cm == rasterize_polygon(oracle::rect(30, 30, 70, 70), 100, 100));

    const auto tiny = make_instance_label(square, 100, 100, 0.1);
    CHECK(tiny.cm == rasterize_polygon(oracle::rect(46, 46, 54, 54), 100, 100));

    // radius 0.4 px: every text pixel is at least 1 px from the background
    const auto almost = make_instance_label(square, 100, 100, 0.99);
    CHECK(almost.cm.count() == 6400);
}

TEST_CASE("make_instance_label equals the composition of geometry operations")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 25; ++t) {
        const double s = 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0;
        Polygon poly;
        const int n = 5 + static_cast<int>(rng() % 8);
        for (int k = 0; k < n; ++k) {
            const double a = 2.0 * M_PI * k / n;
            const double r = 10.0 + static_cast<double>(rng() % 30);
            poly.vertices.push_back({40.0 + r * std::cos(a) + (t % 5) * 7.0, 35.0 + r * std::sin(a)});
        }
        const auto got = make_instance_label(poly, 90, 70, s);
        const auto want = label_by_definition(poly, 90, 70, s);
        CHECK(got.center == want.center);
        CHECK(got.pmd == want.pmd);
        CHECK(got.cm == want.cm);
    }
}

TEST_CASE("instance label invariants")
{
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        const double s = 0.1 + 0.1 * (t % 9);
        const auto poly = oracle::regular_polygon(50 + t % 7, 45, 15 + t, 3 + t % 9, 0.3 * t);
        const auto mask = rasterize_polygon(poly, 120, 110);
        const auto label = make_instance_label(poly, 120, 110, s);
        CHECK(label.pmd > 0);
        CHECK(label.cm_scale == s);
        CHECK(oracle::count_components(label.cm) == 1);
        CHECK(label.cm.test(static_cast<int>(label.center.x), static_cast<int>(label.center.y)));
        CHECK(oracle::subset(label.cm, mask));
        const auto d = distance_transform(mask);
        for (std::size_t i = 0; i < d.size(); ++i)
            if (label.cm[i])
                CHECK(d[i] > (1.0 - s) * label.pmd);
    }
}

TEST_CASE("make_instance_label errors and small cases")
{
    CHECK_THROWS_AS(make_instance_label(oracle::rect(200, 200, 220, 220), 50, 50, 0.5), EmptyMask);
    CHECK_THROWS_AS(make_instance_label(oracle::rect(0, 0, 10, 10), 50, 50, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_instance_label(oracle::rect(0, 0, 10, 10), 50, 50, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_instance_label(Polygon{{{0, 0}, {1, 1}, {2, 2}}}, 50, 50, 0.5), DegeneratePolygon);

    const auto one = make_instance_label(oracle::rect(3, 4, 4, 5), 10, 10, 0.5);
    CHECK(one.pmd == 1.0);
    CHECK(one.cm.count() == 1);
    CHECK(one.cm.test(3, 4));
}

TEST_CASE("polar symmetry: CM outline sits at half PMD from the text outline")
{
    for (int t = 0; t < 12; ++t) {
        const auto poly = t % 2 ? oracle::regular_polygon(100, 90, 30 + 5 * t, 5 + t, 0.2 * t)
                                : oracle::rect(20 + t, 30, 120 + 4 * t, 70 + 5 * t);
        const auto mask = rasterize_polygon(poly, 220, 200);
        const auto label = make_instance_label(poly, 220, 200, 0.5);
        REQUIRE(label.pmd >= 16);
        const auto d = distance_transform(mask);
        const auto ring = outline(label.cm);
        for (std::size_t i = 0; i < ring.size(); ++i)
            if (ring[i])
                CHECK(std::abs(d[i] - label.pmd / 2.0) <= 1.5);
    }
}

TEST_CASE("adjacent instances with a 2 px gap get well separated CMs")
{
    const double s = 0.5;
    for (int t = 0; t < 6; ++t) {
        const int side = 20 + 6 * t;
        const auto a = oracle::rect(5, 5, 5 + side, 5 + side);
        const auto b = oracle::rect(5 + side + 2, 8, 5 + 2 * side + 2, 8 + side + t);
        const int w = 2 * side + 20, h = side + 20;
        const auto la = make_instance_label(a, w, h, s);
        const auto lb = make_instance_label(b, w, h, s);
        CHECK(min_sq_gap(rasterize_polygon(a, w, h), rasterize_polygon(b, w, h)) == 9);
        // gap in pixels = smallest center distance minus one; the strict erosion rounds
        // each side's radius up to the next pixel, which costs at most 1 px overall
        // against the continuous 2 r + 2 bound when r is a half-integer.
        const double gap = std::sqrt(static_cast<double>(min_sq_gap(la.cm, lb.cm))) - 1.0;
        CHECK(gap >= 2.0 * (1.0 - s) * std::min(la.pmd, lb.pmd) + 1.0);
        const double r = (1.0 - s) * std::min(la.pmd, lb.pmd);
        if (std::floor(r) == r)
            CHECK(gap >= 2.0 * (1.0 - s) * std::min(la.pmd, lb.pmd) + 2.0);
    }
}

TEST_CASE("make_instance_label is deterministic")
{
    const auto poly = oracle::regular_polygon(60, 50, 33, 11, 0.4);
    const auto a = make_instance_label(poly, 130, 100, 0.37);
    const auto b = make_instance_label(poly, 130, 100, 0.37);
    CHECK(a.cm == b.cm);
    CHECK(a.pmd == b.pmd);
    CHECK(a.center == b.center);
}

TEST_CASE("render_label_maps")
{
    const auto empty = render_label_maps({}, 20, 10);
    CHECK(empty.cls.count() == 0);
    for (float v : empty.reg.values())
        CHECK(v == 0.0f);

    const auto a = make_instance_label(oracle::rect(2, 2, 30, 30), 80, 40, 0.5);
    const auto b = make_instance_label(oracle::rect(40, 5, 76, 35), 80, 40, 0.5);
    const auto maps = render_label_maps({a, b}, 80, 40);
    CHECK(connected_components(maps.cls).size() == 2);
    for (std::size_t i = 0; i < maps.cls.size(); ++i) {
        CHECK((maps.reg[i] > 0) == (maps.cls[i] != 0));
        if (a.cm[i])
            CHECK(maps.reg[i] == static_cast<float>(a.pmd));
        if (b.cm[i])
            CHECK(maps.reg[i] == static_cast<float>(b.pmd));
    }

    InstanceLabel small{{5.5, 5.5}, 10.0, BinaryMask(12, 12), 0.5};
    InstanceLabel large{{6.5, 6.5}, 40.0, BinaryMask(12, 12), 0.5};
    for (int y = 2; y < 8; ++y)
        for (int x = 2; x < 8; ++x)
            small.cm.set(x, y);
    for (int y = 5; y < 11; ++y)
        for (int x = 5; x < 11; ++x)
            large.cm.set(x, y);
    for (const auto& order : {std::vector{small, large}, std::vector{large, small}}) {
        const auto m = render_label_maps(order, 12, 12);
        CHECK(m.reg(6, 6) == 10.0f);
        CHECK(m.reg(9, 9) == 40.0f);
        CHECK(m.reg(3, 3) == 10.0f);
    }

    CHECK_THROWS_AS(render_label_maps({a}, 81, 40), ShapeMismatch);
}
