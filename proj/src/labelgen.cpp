#include <cmath>

#include "botd/labelgen.hpp"

namespace botd {

void check_cm_scale(double cm_scale)
{
    if (!(cm_scale > 0.0 && cm_scale < 1.0))
        throw InvalidArgument("cm_scale must lie in (0, 1)");
}

double bolding_radius(double pmd, double cm_scale)
{
    return (1.0 - cm_scale) * pmd;
}

InstanceLabel make_instance_label(const Polygon& poly, int width, int height, double cm_scale)
{
    check_cm_scale(cm_scale);
    if (width <= 0 || height <= 0)
        throw InvalidArgument("raster dimensions must be positive");
    // Work inside the polygon's window: outside it every pixel is background either way.
    const auto window = polygon_window(poly, width, height);
    if (window.width == 0) {
        rasterize_polygon(poly, 1, 1);  // reports degenerate input first
        throw EmptyMask();
    }
    auto label = make_instance_label(rasterize_polygon(translated(poly, -window.x0, -window.y0), window.width,
                                                       window.height),
                                     cm_scale);
    label.center.x += window.x0;
    label.center.y += window.y0;
    label.cm = uncrop(label.cm, window, width, height);
    return label;
}

InstanceLabel make_instance_label(const BinaryMask& text_mask, double cm_scale)
{
    check_cm_scale(cm_scale);
    if (text_mask.empty() || !text_mask.any())
        throw EmptyMask();

    // One distance transform serves find_center, compute_pmd and erode_disk.
    const auto sq = squared_distance_transform(text_mask);
    std::int64_t best = 0;
    int cx = 0, cy = 0;
    for (int y = 0; y < sq.height(); ++y)
        for (int x = 0; x < sq.width(); ++x)
            if (sq(x, y) > best) {
                best = sq(x, y);
                cx = x;
                cy = y;
            }

    InstanceLabel label;
    label.cm_scale = cm_scale;
    label.center = {cx + 0.5, cy + 0.5};
    label.pmd = std::sqrt(static_cast<double>(best));

    const double radius = bolding_radius(label.pmd, cm_scale);
    BinaryMask eroded(text_mask.width(), text_mask.height());
    for (std::size_t i = 0; i < eroded.size(); ++i)
        eroded[i] = std::sqrt(static_cast<double>(sq[i])) > radius;
    const auto labelled = label_components(eroded);

    label.cm = BinaryMask(text_mask.width(), text_mask.height());
    if (const auto id = labelled.labels(cx, cy)) {
        for (std::size_t i = 0; i < label.cm.size(); ++i)
            label.cm[i] = labelled.labels[i] == id;
    } else {
        label.cm.set(cx, cy);
    }
    return label;
}

LabelMaps render_label_maps(const std::vector<InstanceLabel>& labels, int width, int height)
{
    LabelMaps maps{BinaryMask(width, height), Raster(width, height, 0.0f)};
    for (const auto& label : labels) {
        if (label.cm.width() != width || label.cm.height() != height)
            throw ShapeMismatch();
        const auto pmd = static_cast<float>(label.pmd);
        for (std::size_t i = 0; i < maps.cls.size(); ++i) {
            if (!label.cm[i])
                continue;
            if (!maps.cls[i] || pmd < maps.reg[i])
                maps.reg[i] = pmd;
            maps.cls[i] = 1;
        }
    }
    return maps;
}

}  // namespace botd
