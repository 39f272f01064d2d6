#include <cmath>
#include <vector>

#include "botd/geometry.hpp"
#include "kernels.hpp"

namespace botd {

namespace {

void check_radius(double r)
{
    if (!(r >= 0.0) || !std::isfinite(r))
        throw InvalidArgument("structuring radius must be finite and non-negative");
}

BinaryMask threshold_erosion(const BinaryMask& mask, const Grid<std::int64_t>& sq, double r)
{
    BinaryMask out(mask.width(), mask.height());
    const auto src = sq.values();
    auto dst = out.values();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        dst[i] = std::sqrt(static_cast<double>(src[i])) > r;
    return out;
}

BinaryMask dilate_parallel(const BinaryMask& mask, double r)
{
    check_radius(r);
    std::vector<std::int64_t> sq(mask.size());
    detail::squared_distance_to_features(mask.values(), mask.width(), mask.height(), sq);
    BinaryMask out(mask.width(), mask.height());
    auto dst = out.values();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        dst[i] = sq[i] != detail::kUnreachable && std::sqrt(static_cast<double>(sq[i])) <= r;
    return out;
}

}  // namespace

BinaryMask erode_disk(const BinaryMask& mask, double r)
{
    check_radius(r);
    return threshold_erosion(mask, squared_distance_transform(mask), r);
}

BinaryMask dilate_disk(const BinaryMask& mask, double r)
{
    return dilate_parallel(mask, r);
}

BinaryMask outline(const BinaryMask& mask)
{
    BinaryMask out(mask.width(), mask.height());
    const int w = mask.width();
    const int h = mask.height();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask(x, y) &&
                (!mask.test(x - 1, y) || !mask.test(x + 1, y) || !mask.test(x, y - 1) || !mask.test(x, y + 1)))
                out(x, y) = 1;
    return out;
}

namespace reference {

BinaryMask erode_disk(const BinaryMask& mask, double r)
{
    check_radius(r);
    const auto sq = reference::squared_distance_transform(mask);
    BinaryMask out(mask.width(), mask.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::sqrt(static_cast<double>(sq[i])) > r;
    return out;
}

BinaryMask dilate_disk(const BinaryMask& mask, double r)
{
    check_radius(r);
    std::vector<std::int64_t> sq(mask.size());
    detail::squared_distance_to_features_reference(mask.values(), mask.width(), mask.height(), sq);
    BinaryMask out(mask.width(), mask.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = sq[i] != detail::kUnreachable && std::sqrt(static_cast<double>(sq[i])) <= r;
    return out;
}

}  // namespace reference

}  // namespace botd
