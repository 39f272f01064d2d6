#include <algorithm>
#include <cmath>

#include <omp.h>

#include "botd/eval.hpp"

namespace botd {

namespace {

// Nearest-rank percentile of an ascending sample.
double percentile(const std::vector<double>& sorted, double q)
{
    if (sorted.empty())
        return 0.0;
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

StageStats stats_of(std::string stage, std::vector<double> ms)
{
    std::sort(ms.begin(), ms.end());
    return {std::move(stage), percentile(ms, 0.5), percentile(ms, 0.95), ms.size()};
}

}  // namespace

BenchReport bench_decode(const std::vector<LabelMaps>& label_maps, double cm_scale, std::size_t repetitions,
                         int threads)
{
    if (repetitions < 1)
        throw InvalidArgument("repetitions must be at least 1");
    BenchReport report;
    report.images = label_maps.size();
    report.repetitions = repetitions;
    report.threads = std::max(1, threads);
    if (label_maps.empty())
        return report;

    std::vector<Raster> cls;
    for (const auto& maps : label_maps)
        cls.push_back(to_probability(maps.cls));

    DecodeOptions options;
    options.cm_scale = cm_scale;
    std::vector<double> binarize, components, bolding, tracing, total;

    const int previous = omp_get_max_threads();
    omp_set_num_threads(report.threads);
    for (std::size_t r = 0; r < repetitions; ++r)
        for (std::size_t i = 0; i < label_maps.size(); ++i) {
            const auto result = decode(cls[i], label_maps[i].reg, options);
            binarize.push_back(1e3 * result.timing.binarize);
            components.push_back(1e3 * result.timing.components);
            bolding.push_back(1e3 * result.timing.bolding);
            tracing.push_back(1e3 * result.timing.tracing);
            total.push_back(1e3 * result.timing.total());
        }
    omp_set_num_threads(previous);

    report.stages.push_back(stats_of("binarize", std::move(binarize)));
    report.stages.push_back(stats_of("components", std::move(components)));
    report.stages.push_back(stats_of("bolding", std::move(bolding)));
    report.stages.push_back(stats_of("tracing", std::move(tracing)));
    const auto totals = stats_of("total", std::move(total));
    report.median_decode_ms = totals.median_ms;
    report.p95_decode_ms = totals.p95_ms;
    return report;
}

}  // namespace botd
