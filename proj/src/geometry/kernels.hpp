#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace botd::detail {

inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

// Squared Euclidean distance from every cell of a width x height grid to the nearest
// cell whose feature byte is non-zero; kUnreachable when there is none.
// Column pass is a two-sweep 1-D scan, row pass a lower envelope of parabolas
// (Felzenszwalb & Huttenlocher). Both passes run under OpenMP.
void squared_distance_to_features(std::span<const std::uint8_t> features, int width, int height,
                                  std::span<std::int64_t> out);

// Same contract, serial, direct row minimisation.
void squared_distance_to_features_reference(std::span<const std::uint8_t> features, int width,
                                            int height, std::span<std::int64_t> out);

// Winding number of point (px, py) with respect to the closed polyline.
template <typename PointRange>
int winding_number(const PointRange& vertices, double px, double py)
{
    int wn = 0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % n];
        const double side = (b.x - a.x) * (py - a.y) - (px - a.x) * (b.y - a.y);
        if (a.y <= py) {
            if (b.y > py && side > 0)
                ++wn;
        } else if (b.y <= py && side < 0) {
            --wn;
        }
    }
    return wn;
}

}  // namespace botd::detail
