#include <algorithm>
#include <chrono>
#include <cmath>

#include "botd/labelgen.hpp"
#include "botd/reconstruct.hpp"

namespace botd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

BinaryMask bold_by_radius(const BinaryMask& cm, double radius)
{
    auto bolded = dilate_disk(outline(cm), radius);
    for (std::size_t i = 0; i < bolded.size(); ++i)
        bolded[i] |= cm[i];
    return bolded;
}

struct ComponentStats {
    double pmd = 0.0;
    double score = 0.0;
};

}  // namespace

BinaryMask bold_outline(const BinaryMask& cm, double pmd, double cm_scale)
{
    if (!(pmd > 0.0) || !std::isfinite(pmd))
        throw InvalidPmd();
    check_cm_scale(cm_scale);
    if (cm.empty() || !cm.any())
        throw EmptyMask();
    return bold_by_radius(cm, bolding_radius(pmd, cm_scale));
}

DecodeResult decode(const Raster& cls, const Raster& reg, const DecodeOptions& options)
{
    if (!cls.same_shape(reg))
        throw ShapeMismatch();
    check_cm_scale(options.cm_scale);
    DecodeResult result;
    const int width = cls.width();
    const int height = cls.height();

    auto t0 = Clock::now();
    BinaryMask binary(width, height);
    for (std::size_t i = 0; i < binary.size(); ++i)
        binary[i] = cls[i] > options.bin_threshold;
    result.timing.binarize = seconds_since(t0);

    t0 = Clock::now();
    const auto labelled = label_components(binary);
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < labelled.components.size(); ++c)
        if (labelled.components[c].area >= options.min_area)
            kept.push_back(c);

    std::vector<ComponentStats> stats(labelled.components.size());
    std::vector<std::vector<float>> pmd_samples;
    if (options.aggregation == PmdAggregation::median)
        pmd_samples.resize(labelled.components.size());
    for (std::size_t i = 0; i < binary.size(); ++i) {
        const auto id = labelled.labels[i];
        if (!id)
            continue;
        auto& s = stats[static_cast<std::size_t>(id - 1)];
        s.pmd += reg[i];
        s.score += cls[i];
        if (!pmd_samples.empty())
            pmd_samples[static_cast<std::size_t>(id - 1)].push_back(reg[i]);
    }
    for (std::size_t c = 0; c < stats.size(); ++c) {
        const auto area = static_cast<double>(labelled.components[c].area);
        stats[c].score /= area;
        if (pmd_samples.empty()) {
            stats[c].pmd /= area;
        } else {
            auto& v = pmd_samples[c];
            const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
            std::nth_element(v.begin(), mid, v.end());
            double m = *mid;
            if (v.size() % 2 == 0)
                m = 0.5 * (m + *std::max_element(v.begin(), mid));
            stats[c].pmd = m;
        }
    }
    result.timing.components = seconds_since(t0);

    // Each component is bolded inside its bounding box grown by the bolding radius,
    // clipped to the image; dilation cannot reach further.
    std::vector<BinaryMask> bolded(kept.size());
    std::vector<std::pair<int, int>> origins(kept.size());
    t0 = Clock::now();
    const std::ptrdiff_t n_kept = static_cast<std::ptrdiff_t>(kept.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n_kept; ++k) {
        const auto c = kept[k];
        const auto& info = labelled.components[c];
        const double radius = std::max(0.0, bolding_radius(stats[c].pmd, options.cm_scale));
        const int margin = static_cast<int>(std::ceil(radius)) + 1;
        const int x0 = std::max(0, info.min_x - margin);
        const int y0 = std::max(0, info.min_y - margin);
        const int x1 = std::min(width - 1, info.max_x + margin);
        const int y1 = std::min(height - 1, info.max_y + margin);
        BinaryMask crop(x1 - x0 + 1, y1 - y0 + 1);
        for (int y = info.min_y; y <= info.max_y; ++y)
            for (int x = info.min_x; x <= info.max_x; ++x)
                if (labelled.labels(x, y) == static_cast<std::int32_t>(c + 1))
                    crop.set(x - x0, y - y0);
        bolded[k] = bold_by_radius(crop, radius);
        origins[k] = {x0, y0};
    }
    result.timing.bolding = seconds_since(t0);

    t0 = Clock::now();
    result.detections.resize(kept.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n_kept; ++k) {
        const auto c = kept[k];
        auto& det = result.detections[k];
        det.polygon = translated(trace_contour(bolded[k]), origins[k].first, origins[k].second);
        det.score = stats[c].score;
        det.pmd = stats[c].pmd;
    }
    result.timing.tracing = seconds_since(t0);
    return result;
}

}  // namespace botd
