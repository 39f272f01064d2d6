#include <doctest.h>

#include <filesystem>
#include <random>

#include "botd/dataio.hpp"
#include "botd/errors.hpp"
#include "oracles.hpp"

using namespace botd;

namespace {

std::filesystem::path scratch_dir(const char* name)
{
    auto dir = std::filesystem::temp_directory_path() / "botd_test_dataio" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

double cross(Point2 o, Point2 a, Point2 b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const double d1 = cross(c, d, a), d2 = cross(c, d, b);
    const double d3 = cross(a, b, c), d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on = [](Point2 p, Point2 q, Point2 r, double c) {
        return c == 0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
               r.y <= std::max(p.y, q.y);
    };
    return on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4);
}

bool simple_polygon(const Polygon& poly)
{
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue;
            if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                return false;
        }
    return true;
}

bool bboxes_apart(const Polygon& a, const Polygon& b, double gap)
{
    const auto ba = bounding_box(a), bb = bounding_box(b);
    return ba.min_x - bb.max_x >= gap || bb.min_x - ba.max_x >= gap || ba.min_y - bb.max_y >= gap ||
           bb.min_y - ba.max_y >= gap;
}

}  // namespace

TEST_CASE("icdar2015 parsing")
{
    auto a = parse_icdar2015("0,0,10,0,10,5,0,5,hello\n");
    REQUIRE(a.size() == 1);
    CHECK(a[0].polygon == Polygon{{{0, 0}, {10, 0}, {10, 5}, {0, 5}}});
    CHECK(a[0].care);
    CHECK(a[0].transcription == "hello");

    a = parse_icdar2015("\xEF\xBB\xBF" "1,2,3,4,5,6,7,8,###\r\n\r\n 9 , 8 ,7,6,5,4,3,2,a,b,c\n");
    REQUIRE(a.size() == 2);
    CHECK_FALSE(a[0].care);
    CHECK(a[1].care);
    CHECK(a[1].transcription == "a,b,c");
    CHECK(a[1].polygon.vertices[0] == Point2{9, 8});

    try {
        parse_icdar2015("0,0,10,0");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    try {
        parse_icdar2015("0,0,10,0,10,5,0,5,x\n0,0,1,x,1,1,0,1,y\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK(parse_icdar2015("").empty());
}

TEST_CASE("ctw1500 parsing")
{
    std::string line;
    for (int i = 0; i < 28; ++i)
        line += (i ? "," : "") + std::to_string(i * 3);
    auto r = parse_ctw1500(line + "\n");
    REQUIRE(r.annotations.size() == 1);
    CHECK(r.annotations[0].polygon.vertices.size() == 14);
    CHECK(r.annotations[0].care);
    CHECK(r.lenient_lines.empty());

    r = parse_ctw1500(line + "\n0,0,10,0,10,5,0,5\n");
    REQUIRE(r.annotations.size() == 2);
    CHECK(r.annotations[1].polygon.vertices.size() == 4);
    CHECK(r.lenient_lines == std::vector<std::size_t>{2});

    const auto odd = line.substr(0, line.rfind(','));
    try {
        parse_ctw1500(odd);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    CHECK_THROWS_AS(parse_ctw1500("0,0,1,1"), ParseError);
    CHECK_THROWS_AS(parse_ctw1500("0,0,1,1,a,b"), ParseError);
}

TEST_CASE("annotation write then parse is identity")
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        std::vector<TextInstanceAnnotation> quads, curves;
        for (int i = 0; i < 5; ++i) {
            Polygon q, c;
            for (int k = 0; k < 4; ++k)
                q.vertices.push_back({static_cast<double>(rng() % 1000) / 4.0, static_cast<double>(rng() % 1000)});
            for (int k = 0; k < 14; ++k)
                c.vertices.push_back({static_cast<double>(rng() % 1000), static_cast<double>(rng() % 1000) - 20});
            const bool care = rng() % 3;
            quads.push_back({q, care, care ? std::optional<std::string>("w" + std::to_string(i) + ",x")
                                           : std::optional<std::string>("###")});
            curves.push_back({c, true, std::nullopt});
        }
        CHECK(parse_icdar2015(write_icdar2015(quads)) == quads);
        CHECK(parse_ctw1500(write_ctw1500(curves)).annotations == curves);
        CHECK(parse_annotations(write_annotations(curves, AnnotationFormat::ctw1500), AnnotationFormat::ctw1500) ==
              curves);
    }
    CHECK(parse_format_name(format_name(AnnotationFormat::icdar2015)) == AnnotationFormat::icdar2015);
    CHECK_THROWS_AS(parse_format_name("coco"), InvalidArgument);
    CHECK(write_polygons({Polygon{{{0.4, 1.6}, {10, 0}, {3, 3}}}}) == "0,2,10,0,3,3\n");
}

TEST_CASE("raster encodings round trip")
{
    std::mt19937_64 rng(2);
    const auto mask = oracle::random_mask(rng, 40);
    CHECK(decode_pgm(encode_pgm(mask)) == mask);
    CHECK(encode_pgm(mask).rfind("P5\n", 0) == 0);

    Raster r(7, 3);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = static_cast<float>(i) * 0.37f - 1.0f;
    const auto bytes = encode_float_raster(r);
    CHECK(bytes.size() == 8 + 4 * r.size());
    CHECK(static_cast<unsigned char>(bytes[0]) == 7);
    CHECK(decode_float_raster(bytes) == r);
    CHECK_THROWS_AS(decode_float_raster(bytes.substr(0, bytes.size() - 1)), ParseError);
    CHECK_THROWS_AS(decode_pgm("P6\n1 1\n255\nx"), ParseError);

    const auto dir = scratch_dir("raster");
    write_pgm(dir / "m.pgm", mask);
    CHECK(read_pgm(dir / "m.pgm") == mask);
    const auto prob = read_pgm_probability(dir / "m.pgm");
    for (std::size_t i = 0; i < mask.size(); ++i)
        CHECK(prob[i] == (mask[i] ? 1.0f : 0.0f));
    write_float_raster(dir / "r.bin", r);
    CHECK(read_float_raster(dir / "r.bin") == r);
    CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
}

TEST_CASE("synthetic datasets are deterministic and well formed")
{
    SynthOptions opts;
    opts.kind = SynthKind::squares;
    const auto a = synth_dataset(opts);
    CHECK(a == synth_dataset(opts));
    CHECK(a.size() == 10);
    CHECK(write_icdar2015(a[3].instances) == write_icdar2015(synth_dataset(opts)[3].instances));
    opts.seed = 8;
    CHECK(synth_dataset(opts) != a);

    opts.kind = SynthKind::disks;
    opts.instances_per_image = 4;
    for (const auto& img : synth_dataset(opts))
        for (const auto& inst : img.instances)
            CHECK(distinct_vertex_count(inst.polygon) == 32);

    opts.kind = SynthKind::ribbons;
    for (const auto& img : synth_dataset(opts)) {
        CHECK(img.instances.size() == 4);
        for (const auto& inst : img.instances)
            CHECK(inst.polygon.vertices.size() == 14);
    }

    CHECK(parse_synth_kind("convex") == SynthKind::convex);
    CHECK(synth_kind_name(SynthKind::ribbons) == "ribbons");
    CHECK_THROWS_AS(parse_synth_kind("blobs"), InvalidArgument);
    opts.count = 0;
    CHECK_THROWS_AS(synth_dataset(opts), InvalidArgument);
}

TEST_CASE("synthetic instances are valid polygons for 1000 seeds")
{
    const SynthKind kinds[] = {SynthKind::squares, SynthKind::disks, SynthKind::convex, SynthKind::ribbons};
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        SynthOptions opts;
        opts.seed = seed;
        opts.count = 1;
        opts.size = 320;
        opts.kind = kinds[seed % 4];
        opts.instances_per_image = 2;
        opts.adhesion_pairs = seed % 8 >= 4;
        const auto img = synth_dataset(opts).at(0);
        REQUIRE(img.instances.size() == 2);
        for (const auto& inst : img.instances) {
            INFO("seed " << seed);
            CHECK(signed_area(inst.polygon) > 0.0);
            CHECK(simple_polygon(inst.polygon));
            const auto box = bounding_box(inst.polygon);
            CHECK(box.min_x >= 0);
            CHECK(box.min_y >= 0);
            CHECK(box.max_x <= img.width);
            CHECK(box.max_y <= img.height);
        }
        CHECK(bboxes_apart(img.instances[0].polygon, img.instances[1].polygon, 2.0));
    }
}

TEST_CASE("synthetic instances are thick")
{
    for (auto kind : {SynthKind::squares, SynthKind::disks, SynthKind::convex, SynthKind::ribbons}) {
        SynthOptions opts;
        opts.kind = kind;
        opts.count = 5;
        opts.instances_per_image = 3;
        for (const auto& img : synth_dataset(opts))
            for (const auto& inst : img.instances) {
                const auto mask = rasterize_polygon(inst.polygon, img.width, img.height);
                CHECK(compute_pmd(mask, find_center(mask)) >= 8.0);
            }
    }
}

TEST_CASE("adhesion pairs have a 2 px gap")
{
    SynthOptions opts;
    opts.kind = SynthKind::squares;
    opts.instances_per_image = 2;
    opts.adhesion_pairs = true;
    for (const auto& img : synth_dataset(opts)) {
        const auto a = bounding_box(img.instances[0].polygon);
        const auto b = bounding_box(img.instances[1].polygon);
        CHECK(b.min_y - a.max_y == 2.0);
    }
}

TEST_CASE("dataset directory round trip")
{
    SynthOptions opts;
    opts.count = 3;
    opts.kind = SynthKind::convex;
    auto images = synth_dataset(opts);
    images.push_back({"quads", 50, 40, {{oracle::rect(1, 1, 20, 20), false, "###"}, {oracle::rect(25, 1, 45, 20), true, "t"}}});
    const auto dir = scratch_dir("dataset");
    write_dataset(dir, images);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "quads.txt"));
    const auto back = read_dataset(dir / "manifest.json");
    REQUIRE(back.size() == images.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].name == images[i].name);
        CHECK(back[i].width == images[i].width);
        REQUIRE(back[i].instances.size() == images[i].instances.size());
        for (std::size_t k = 0; k < back[i].instances.size(); ++k) {
            CHECK(back[i].instances[k].polygon == images[i].instances[k].polygon);
            CHECK(back[i].instances[k].care == images[i].instances[k].care);
        }
    }
    CHECK(back.back().instances[1].transcription == "t");
    CHECK_THROWS_AS(read_dataset(dir / "nope.json"), IoError);
}
