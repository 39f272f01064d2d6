#pragma once

#include <string>

#include "botd/dataio.hpp"

namespace botd::cli {

struct Rgb {
    unsigned char r = 0, g = 0, b = 0;
};

inline constexpr Rgb kTextFill{48, 48, 48};
inline constexpr Rgb kGroundTruth{0, 220, 0};
inline constexpr Rgb kCenterMask{0, 140, 255};
inline constexpr Rgb kPmdSegment{255, 40, 40};
inline constexpr Rgb kReconstructed{255, 220, 0};

/// Binary PPM (P6) of every care instance: text mask fill, ground-truth outline,
/// CM outline, a segment of length PMD from the center to the nearest background
/// pixel, and the outline of the bolded reconstruction.
std::string render_overlay(const AnnotatedImage& image, double cm_scale);

}  // namespace botd::cli
