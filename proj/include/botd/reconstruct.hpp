#pragma once

#include <vector>

#include "botd/geometry.hpp"

namespace botd {

/// Bolds the CM outline by (1 - cm_scale) * pmd and adds the CM interior back.
/// The result equals dilate_disk(cm, (1 - cm_scale) * pmd).
BinaryMask bold_outline(const BinaryMask& cm, double pmd, double cm_scale);

enum class PmdAggregation { mean, median };

struct DecodeOptions {
    double cm_scale = 0.5;
    double bin_threshold = 0.5;
    std::size_t min_area = 16;
    PmdAggregation aggregation = PmdAggregation::mean;
};

struct Detection {
    Polygon polygon;
    double score = 0.0;
    double pmd = 0.0;
};

/// Wall-clock seconds spent in each decoding stage.
struct StageTiming {
    double binarize = 0.0;
    double components = 0.0;
    double bolding = 0.0;
    double tracing = 0.0;

    double total() const noexcept { return binarize + components + bolding + tracing; }
};

struct DecodeResult {
    std::vector<Detection> detections;
    StageTiming timing;
};

/// Turns head outputs back into text polygons: binarize cls, split into 8-connected
/// components, drop small ones, bold each by its aggregated PMD and trace the outline.
/// Detections follow component order (first pixel in raster order).
DecodeResult decode(const Raster& cls, const Raster& reg, const DecodeOptions& options = {});

}  // namespace botd
