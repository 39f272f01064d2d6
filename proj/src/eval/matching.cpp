#include <cmath>
#include <algorithm>
#include <numeric>

#include "botd/eval.hpp"

namespace botd {

namespace {

// Rasterized polygon restricted to its window of the image.
struct WindowMask {
    PixelWindow window;
    BinaryMask mask;
    std::size_t area = 0;
};

WindowMask rasterize_window(const Polygon& poly, int width, int height)
{
    WindowMask out;
    if (distinct_vertex_count(poly) < 3 || std::abs(signed_area(poly)) < 1e-12)
        return out;
    out.window = polygon_window(poly, width, height);
    if (out.window.width == 0)
        return out;
    out.mask = rasterize_polygon(translated(poly, -out.window.x0, -out.window.y0), out.window.width,
                                 out.window.height);
    out.area = out.mask.count();
    return out;
}

double window_iou(const WindowMask& a, const WindowMask& b)
{
    if (a.area == 0 || b.area == 0)
        return a.area == b.area ? 1.0 : 0.0;
    const int x0 = std::max(a.window.x0, b.window.x0);
    const int y0 = std::max(a.window.y0, b.window.y0);
    const int x1 = std::min(a.window.x0 + a.window.width, b.window.x0 + b.window.width);
    const int y1 = std::min(a.window.y0 + a.window.height, b.window.y0 + b.window.height);
    std::size_t inter = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            inter += a.mask(x - a.window.x0, y - a.window.y0) && b.mask(x - b.window.x0, y - b.window.y0);
    return static_cast<double>(inter) / static_cast<double>(a.area + b.area - inter);
}

double ratio_or_one(std::size_t num, std::size_t den)
{
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ImageMatch match_detections(const std::vector<ScoredPolygon>& preds, const std::vector<GroundTruthPolygon>& gts,
                            int width, int height, double iou_threshold)
{
    if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
        throw InvalidArgument("IoU threshold must lie in (0, 1)");

    std::vector<WindowMask> pred_masks;
    std::vector<WindowMask> gt_masks;
    for (const auto& p : preds)
        pred_masks.push_back(rasterize_window(p.polygon, width, height));
    for (const auto& g : gts)
        gt_masks.push_back(rasterize_window(g.polygon, width, height));

    std::vector<std::vector<double>> iou(preds.size(), std::vector<double>(gts.size()));
    for (std::size_t p = 0; p < preds.size(); ++p)
        for (std::size_t g = 0; g < gts.size(); ++g)
            iou[p][g] = window_iou(pred_masks[p], gt_masks[g]);

    ImageMatch match;
    std::vector<std::size_t> order;
    for (std::size_t p = 0; p < preds.size(); ++p) {
        std::size_t best = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g)
            if (best == gts.size() || iou[p][g] > iou[p][best])
                best = g;
        if (best < gts.size() && !gts[best].care && iou[p][best] >= iou_threshold)
            ++match.discarded;
        else
            order.push_back(p);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });

    std::vector<bool> taken(gts.size(), false);
    for (const auto p : order) {
        std::size_t best = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!gts[g].care || taken[g] || iou[p][g] < iou_threshold)
                continue;
            if (best == gts.size() || iou[p][g] > iou[p][best])
                best = g;
        }
        if (best < gts.size()) {
            taken[best] = true;
            ++match.true_positives;
        } else {
            ++match.false_positives;
        }
    }
    for (std::size_t g = 0; g < gts.size(); ++g)
        if (gts[g].care && !taken[g])
            ++match.false_negatives;
    return match;
}

double f_measure(double precision, double recall)
{
    return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

EvalReport summarize(std::vector<ImageMatch> per_image)
{
    EvalReport report;
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& m : per_image) {
        tp += m.true_positives;
        fp += m.false_positives;
        fn += m.false_negatives;
    }
    report.precision = ratio_or_one(tp, tp + fp);
    report.recall = ratio_or_one(tp, tp + fn);
    report.f_measure = f_measure(report.precision, report.recall);
    report.per_image = std::move(per_image);
    return report;
}

}  // namespace botd
