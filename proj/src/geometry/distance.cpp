#include <cmath>
#include <vector>

#include "botd/geometry.hpp"
#include "kernels.hpp"

namespace botd {

namespace detail {

namespace {

constexpr std::int64_t kNoColumnFeature = -1;

// Distance along the column to the nearest feature row, or kNoColumnFeature.
void column_pass(std::span<const std::uint8_t> features, int width, int height, int x,
                 std::span<std::int64_t> out)
{
    const std::int64_t w = width;
    std::int64_t last = kNoColumnFeature;
    for (int y = 0; y < height; ++y) {
        if (features[y * w + x])
            last = y;
        out[y * w + x] = last == kNoColumnFeature ? kNoColumnFeature : y - last;
    }
    last = kNoColumnFeature;
    for (int y = height - 1; y >= 0; --y) {
        if (features[y * w + x])
            last = y;
        if (last != kNoColumnFeature) {
            auto& d = out[y * w + x];
            if (d == kNoColumnFeature || last - y < d)
                d = last - y;
        }
    }
}

struct EnvelopeScratch {
    std::vector<std::int64_t> f;
    std::vector<int> sites;
    std::vector<double> bounds;

    explicit EnvelopeScratch(int n) : f(n), sites(n), bounds(n + 1) {}
};

// In place: row holds column distances on entry, squared 2-D distances on exit.
void row_pass(std::span<std::int64_t> row, EnvelopeScratch& s)
{
    const int n = static_cast<int>(row.size());
    for (int q = 0; q < n; ++q)
        s.f[q] = row[q] == kNoColumnFeature ? kUnreachable : row[q] * row[q];

    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (s.f[q] == kUnreachable)
            continue;
        if (k < 0) {
            k = 0;
            s.sites[0] = q;
            s.bounds[0] = -INFINITY;
            s.bounds[1] = INFINITY;
            continue;
        }
        double cut = 0.0;
        for (;;) {
            const int p = s.sites[k];
            cut = static_cast<double>((s.f[q] + std::int64_t{q} * q) - (s.f[p] + std::int64_t{p} * p)) /
                  (2.0 * (q - p));
            if (cut <= s.bounds[k])
                --k;  // bounds[0] is -inf, so k never drops below 0
            else
                break;
        }
        ++k;
        s.sites[k] = q;
        s.bounds[k] = cut;
        s.bounds[k + 1] = INFINITY;
    }

    if (k < 0) {
        for (auto& v : row)
            v = kUnreachable;
        return;
    }
    int j = 0;
    for (int x = 0; x < n; ++x) {
        while (s.bounds[j + 1] < x)
            ++j;
        const std::int64_t dx = x - s.sites[j];
        row[x] = dx * dx + s.f[s.sites[j]];
    }
}

}  // namespace

void squared_distance_to_features(std::span<const std::uint8_t> features, int width, int height,
                                  std::span<std::int64_t> out)
{
#pragma omp parallel for schedule(static)
    for (int x = 0; x < width; ++x)
        column_pass(features, width, height, x, out);

#pragma omp parallel
    {
        EnvelopeScratch scratch(width);
#pragma omp for schedule(static)
        for (int y = 0; y < height; ++y)
            row_pass(out.subspan(static_cast<std::size_t>(y) * width, static_cast<std::size_t>(width)),
                     scratch);
    }
}

void squared_distance_to_features_reference(std::span<const std::uint8_t> features, int width,
                                            int height, std::span<std::int64_t> out)
{
    std::vector<std::int64_t> column(out.size());
    for (int x = 0; x < width; ++x)
        column_pass(features, width, height, x, column);

    for (int y = 0; y < height; ++y) {
        const std::size_t base = static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            std::int64_t best = kUnreachable;
            for (int k = 0; k < width; ++k) {
                const std::int64_t g = column[base + k];
                if (g == kNoColumnFeature)
                    continue;
                const std::int64_t dx = x - k;
                best = std::min(best, dx * dx + g * g);
            }
            out[base + x] = best;
        }
    }
}

}  // namespace detail

namespace {

// Background with a one-pixel background frame: the nearest out-of-image position is
// always on that frame.
std::vector<std::uint8_t> padded_background(const BinaryMask& mask)
{
    const int pw = mask.width() + 2;
    const int ph = mask.height() + 2;
    std::vector<std::uint8_t> bg(static_cast<std::size_t>(pw) * ph, 1);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            bg[static_cast<std::size_t>(y + 1) * pw + (x + 1)] = mask(x, y) ? 0 : 1;
    return bg;
}

template <typename Kernel>
Grid<std::int64_t> squared_dt_with(const BinaryMask& mask, Kernel kernel)
{
    if (mask.empty())
        throw InvalidArgument("mask has no pixels");
    const int pw = mask.width() + 2;
    const int ph = mask.height() + 2;
    const auto bg = padded_background(mask);
    std::vector<std::int64_t> padded(bg.size());
    kernel(bg, pw, ph, padded);

    Grid<std::int64_t> out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            out(x, y) = padded[static_cast<std::size_t>(y + 1) * pw + (x + 1)];
    return out;
}

}  // namespace

Grid<std::int64_t> squared_distance_transform(const BinaryMask& mask)
{
    return squared_dt_with(mask, detail::squared_distance_to_features);
}

namespace reference {

Grid<std::int64_t> squared_distance_transform(const BinaryMask& mask)
{
    return squared_dt_with(mask, detail::squared_distance_to_features_reference);
}

}  // namespace reference

DistanceField distance_transform(const BinaryMask& mask)
{
    const auto sq = squared_distance_transform(mask);
    DistanceField out(mask.width(), mask.height());
    const auto src = sq.values();
    auto dst = out.values();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        dst[i] = std::sqrt(static_cast<double>(src[i]));
    return out;
}

Point2 find_center(const BinaryMask& mask)
{
    if (mask.empty() || !mask.any())
        throw EmptyMask();
    const auto sq = squared_distance_transform(mask);
    std::int64_t best = 0;
    int bx = 0, by = 0;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (sq(x, y) > best) {
                best = sq(x, y);
                bx = x;
                by = y;
            }
    return {bx + 0.5, by + 0.5};
}

double compute_pmd(const BinaryMask& mask, Point2 center)
{
    const double fx = std::floor(center.x);
    const double fy = std::floor(center.y);
    if (!std::isfinite(fx) || !std::isfinite(fy) || center.x - fx != 0.5 || center.y - fy != 0.5 ||
        fx < 0 || fy < 0 || fx >= mask.width() || fy >= mask.height())
        throw CenterOutsideMask();
    const int x = static_cast<int>(fx);
    const int y = static_cast<int>(fy);
    if (!mask.test(x, y))
        throw CenterOutsideMask();
    return std::sqrt(static_cast<double>(squared_distance_transform(mask)(x, y)));
}

}  // namespace botd
