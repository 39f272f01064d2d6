#include <algorithm>
#include <vector>

#include "botd/geometry.hpp"

namespace botd {

ComponentLabels label_components(const BinaryMask& mask)
{
    ComponentLabels result{Grid<std::int32_t>(mask.width(), mask.height()), {}};
    auto& labels = result.labels;
    std::vector<std::pair<int, int>> stack;

    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y) || labels(x, y))
                continue;
            const auto id = static_cast<std::int32_t>(result.components.size() + 1);
            ComponentInfo info{0, x, y, x, y, x, y};
            labels(x, y) = id;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++info.area;
                info.min_x = std::min(info.min_x, cx);
                info.max_x = std::max(info.max_x, cx);
                info.min_y = std::min(info.min_y, cy);
                info.max_y = std::max(info.max_y, cy);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (mask.test(nx, ny) && !labels(nx, ny)) {
                            labels(nx, ny) = id;
                            stack.emplace_back(nx, ny);
                        }
                    }
            }
            result.components.push_back(info);
        }
    }
    return result;
}

std::vector<BinaryMask> connected_components(const BinaryMask& mask)
{
    const auto labelled = label_components(mask);
    std::vector<BinaryMask> out(labelled.components.size(), BinaryMask(mask.width(), mask.height()));
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (const auto id = labelled.labels[i])
            out[static_cast<std::size_t>(id - 1)][i] = 1;
    return out;
}

}  // namespace botd
