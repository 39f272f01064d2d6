#include <cmath>
#include <exception>

#include "botd/eval.hpp"

namespace botd {

double mask_iou(const BinaryMask& a, const BinaryMask& b)
{
    if (!a.same_shape(b))
        throw ShapeMismatch();
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inter += a[i] && b[i];
        uni += a[i] || b[i];
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

Raster to_probability(const BinaryMask& mask)
{
    Raster out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i)
        out[i] = mask[i] ? 1.0f : 0.0f;
    return out;
}

double upper_iou(const Polygon& poly, int width, int height, double image_scale, double cm_scale)
{
    check_cm_scale(cm_scale);
    if (width <= 0 || height <= 0)
        throw InvalidArgument("image dimensions must be positive");
    Polygon target = poly;
    if (image_scale > 0) {
        const double factor = image_scale / std::min(width, height);
        target = scaled(poly, factor);
        width = std::max(1, static_cast<int>(std::lround(width * factor)));
        height = std::max(1, static_cast<int>(std::lround(height * factor)));
    }
    const auto window = polygon_window(target, width, height);
    if (window.width == 0) {
        rasterize_polygon(target, 1, 1);
        throw EmptyMask();
    }
    const auto gt = rasterize_polygon(translated(target, -window.x0, -window.y0), window.width, window.height);
    const auto label = make_instance_label(gt, cm_scale);
    return mask_iou(bold_outline(label.cm, label.pmd, cm_scale), gt);
}

namespace {

struct Instance {
    const Polygon* polygon;
    int width, height;
};

UpperIoUReport sweep(const std::vector<Instance>& instances, std::string axis_name, const std::vector<double>& values,
                     bool image_axis, double fixed)
{
    UpperIoUReport report;
    report.axis_name = std::move(axis_name);
    report.instances = instances.size();
    std::vector<double> per_instance(instances.size());
    for (const double value : values) {
        const double image_scale = image_axis ? value : fixed;
        const double cm_scale = image_axis ? fixed : value;
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(instances.size());
        std::vector<std::exception_ptr> errors(instances.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto& inst = instances[i];
            try {
                per_instance[i] = upper_iou(*inst.polygon, inst.width, inst.height, image_scale, cm_scale);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (const auto& e : errors)
            if (e)
                std::rethrow_exception(e);
        double sum = 0.0;
        for (double v : per_instance)
            sum += v;
        report.axis.push_back(value);
        report.iou.push_back(instances.empty() ? 0.0 : sum / static_cast<double>(instances.size()));
    }
    return report;
}

}  // namespace

UpperIoUStudy upper_iou_study(const std::vector<AnnotatedImage>& dataset, const std::vector<double>& image_scales,
                              const std::vector<double>& cm_scales, const UpperIoUStudyOptions& options)
{
    for (double s : cm_scales)
        check_cm_scale(s);
    check_cm_scale(options.fixed_cm_scale);
    for (double s : image_scales)
        if (!(s > 0))
            throw InvalidArgument("image scales must be positive");

    std::vector<Instance> instances;
    for (const auto& image : dataset)
        for (const auto& ann : image.instances)
            if (ann.care) {
                if (distinct_vertex_count(ann.polygon) < 3 || std::abs(signed_area(ann.polygon)) < 1e-12)
                    throw DegeneratePolygon();
                instances.push_back({&ann.polygon, image.width, image.height});
            }
    if (instances.empty())
        throw InvalidArgument("upper IoU study needs at least one care instance");

    UpperIoUStudy study;
    study.by_image_scale = sweep(instances, "image_scale", image_scales, true, options.fixed_cm_scale);
    study.by_cm_scale = sweep(instances, "cm_scale", cm_scales, false, options.fixed_image_scale);
    return study;
}

}  // namespace botd
