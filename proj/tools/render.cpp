#include "render.hpp"

#include <cmath>
#include <limits>

#include "botd/labelgen.hpp"
#include "botd/reconstruct.hpp"

namespace botd::cli {

namespace {

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), pixels_(static_cast<std::size_t>(w) * h) {}

    void put(int x, int y, Rgb c)
    {
        if (x >= 0 && y >= 0 && x < w_ && y < h_)
            pixels_[static_cast<std::size_t>(y) * w_ + x] = c;
    }

    void paint(const BinaryMask& m, Rgb c, int dx = 0, int dy = 0)
    {
        for (int y = 0; y < m.height(); ++y)
            for (int x = 0; x < m.width(); ++x)
                if (m(x, y))
                    put(x + dx, y + dy, c);
    }

    void line(double x0, double y0, double x1, double y1, Rgb c)
    {
        const int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            put(static_cast<int>(std::floor(x0 + t * (x1 - x0))), static_cast<int>(std::floor(y0 + t * (y1 - y0))), c);
        }
    }

    std::string ppm() const
    {
        std::string out = "P6\n" + std::to_string(w_) + " " + std::to_string(h_) + "\n255\n";
        out.reserve(out.size() + pixels_.size() * 3);
        for (const auto& p : pixels_) {
            out.push_back(static_cast<char>(p.r));
            out.push_back(static_cast<char>(p.g));
            out.push_back(static_cast<char>(p.b));
        }
        return out;
    }

private:
    int w_, h_;
    std::vector<Rgb> pixels_;
};

// Nearest pixel outside `mask` (the image border counts as outside), ties in raster order.
Point2 nearest_background(const BinaryMask& mask, int cx, int cy, double pmd)
{
    const int reach = static_cast<int>(std::ceil(pmd)) + 1;
    long best = std::numeric_limits<long>::max();
    Point2 at{static_cast<double>(cx), static_cast<double>(cy)};
    for (int y = cy - reach; y <= cy + reach; ++y)
        for (int x = cx - reach; x <= cx + reach; ++x) {
            if (mask.test(x, y))
                continue;
            const long d = static_cast<long>(x - cx) * (x - cx) + static_cast<long>(y - cy) * (y - cy);
            if (d < best) {
                best = d;
                at = {static_cast<double>(x), static_cast<double>(y)};
            }
        }
    return at;
}

}  // namespace

std::string render_overlay(const AnnotatedImage& image, double cm_scale)
{
    struct Instance {
        PixelWindow window;
        BinaryMask mask;
    };
    std::vector<Instance> instances;
    for (const auto& inst : image.instances) {
        if (!inst.care)
            continue;
        const auto window = polygon_window(inst.polygon, image.width, image.height);
        if (window.width == 0)
            continue;
        auto mask = rasterize_polygon(translated(inst.polygon, -window.x0, -window.y0), window.width, window.height);
        if (mask.any())
            instances.push_back({window, std::move(mask)});
    }

    Canvas canvas(image.width, image.height);
    for (const auto& [window, mask] : instances)
        canvas.paint(mask, kTextFill, window.x0, window.y0);
    for (const auto& [window, mask] : instances) {
        const auto label = make_instance_label(mask, cm_scale);
        canvas.paint(outline(bold_outline(label.cm, label.pmd, cm_scale)), kReconstructed, window.x0, window.y0);
        canvas.paint(outline(mask), kGroundTruth, window.x0, window.y0);
        canvas.paint(outline(label.cm), kCenterMask, window.x0, window.y0);
        const int cx = static_cast<int>(std::floor(label.center.x));
        const int cy = static_cast<int>(std::floor(label.center.y));
        const auto to = nearest_background(mask, cx, cy, label.pmd);
        canvas.line(label.center.x + window.x0, label.center.y + window.y0, to.x + 0.5 + window.x0,
                    to.y + 0.5 + window.y0, kPmdSegment);
    }
    return canvas.ppm();
}

}  // namespace botd::cli
